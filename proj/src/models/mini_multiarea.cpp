/*
 * Copyright 2026 The proxysim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "proxysim/models/mini_multiarea.hpp"

#include <map>
#include <set>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"
#include "proxysim/core/rng.hpp"

namespace proxysim {
namespace {

constexpr Rank kUnassigned = ~Rank{0};

std::vector<Rank> resolve_assignment(const MiniMultiAreaSpec& spec,
                                     const PackingAssignment& assignment,
                                     std::uint32_t n_ranks) {
  if (assignment.area_ids.size() != assignment.bin_of.size()) {
    throw InvalidArgument("assignment ids and bins differ in length");
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t a = 0; a < spec.areas.size(); ++a) index[spec.areas[a].id] = a;
  std::vector<Rank> rank(spec.areas.size(), kUnassigned);
  for (std::size_t i = 0; i < assignment.area_ids.size(); ++i) {
    const auto it = index.find(assignment.area_ids[i]);
    if (it == index.end()) {
      throw InvalidArgument(fmt::format("assignment references unknown area '{}'",
                                        assignment.area_ids[i]));
    }
    if (rank[it->second] != kUnassigned) {
      throw InvalidArgument(fmt::format("area '{}' assigned twice", it->first));
    }
    if (assignment.bin_of[i] >= n_ranks) {
      throw InvalidArgument(fmt::format("area '{}' assigned to bin {} but only {} ranks exist",
                                        it->first, assignment.bin_of[i], n_ranks));
    }
    rank[it->second] = assignment.bin_of[i];
  }
  for (std::size_t a = 0; a < rank.size(); ++a) {
    if (rank[a] == kUnassigned) {
      throw InvalidArgument(fmt::format("area '{}' has no assignment", spec.areas[a].id));
    }
  }
  return rank;
}

struct Edge {
  std::uint32_t source;  // position in the source area, E then I
  std::uint32_t target;  // position in the target area, E then I
  double weight;
  std::uint32_t delay;
};

}  // namespace

MiniMultiAreaSpec MiniMultiAreaSpec::uniform(std::uint32_t n_areas, std::uint32_t n_exc,
                                             std::uint32_t n_inh, std::uint64_t inter_k) {
  MiniMultiAreaSpec spec;
  for (std::uint32_t a = 0; a < n_areas; ++a) {
    spec.areas.push_back({fmt::format("A{}", a), n_exc, n_inh});
  }
  spec.inter_k.assign(n_areas, std::vector<std::uint64_t>(n_areas, inter_k));
  for (std::uint32_t a = 0; a < n_areas; ++a) spec.inter_k[a][a] = 0;
  return spec;
}

void MiniMultiAreaSpec::validate() const {
  if (areas.empty()) throw InvalidArgument("mini multi-area model needs at least one area");
  std::set<std::string> ids;
  for (const MiniArea& a : areas) {
    if (!ids.insert(a.id).second) throw InvalidArgument(fmt::format("duplicate area id '{}'", a.id));
    if (a.n_exc == 0 || a.n_inh == 0) {
      throw InvalidArgument(fmt::format("area '{}' needs both populations", a.id));
    }
  }
  if (inter_k.size() != areas.size()) {
    throw InvalidArgument("inter-area matrix must have one row per area");
  }
  for (const auto& row : inter_k) {
    if (row.size() != areas.size()) {
      throw InvalidArgument("inter-area matrix must have one column per area");
    }
  }
  if (intra_k_exc == 0 && intra_k_inh == 0) throw InvalidArgument("intra-area in-degree is zero");
  if (intra_delay_steps < 1 || inter_delay_steps < 1) {
    throw InvalidArgument("delays must be at least one step");
  }
  neuron.validate();
}

std::vector<AreaSpec> MiniMultiAreaSpec::area_specs() const {
  std::vector<AreaSpec> out;
  for (std::size_t t = 0; t < areas.size(); ++t) {
    std::uint64_t k = intra_k_exc + intra_k_inh;
    for (std::size_t s = 0; s < areas.size(); ++s) {
      if (s != t) k += inter_k[t][s];
    }
    const std::uint64_t n = std::uint64_t{areas[t].n_exc} + areas[t].n_inh;
    out.push_back({areas[t].id, n, n * k});
  }
  return out;
}

double MiniMultiAreaSpec::external_rate_hz() const noexcept {
  if (intra_k_exc == 0 || j_exc_mv <= 0.0) return 0.0;
  const double nu_thr_per_ms = (neuron.V_th - neuron.V_rest) /
                               (j_exc_mv * static_cast<double>(intra_k_exc) * neuron.tau_m);
  return eta * nu_thr_per_ms * static_cast<double>(intra_k_exc) * 1000.0;
}

PackingAssignment round_robin_assignment(const MiniMultiAreaSpec& spec, std::uint32_t n_ranks) {
  if (n_ranks == 0) throw InvalidArgument("number of ranks must be positive");
  PackingAssignment out;
  out.bin_weight.assign(n_ranks, 0);
  const auto specs = spec.area_specs();
  for (std::size_t a = 0; a < spec.areas.size(); ++a) {
    const auto bin = static_cast<std::uint32_t>(a % n_ranks);
    out.area_ids.push_back(spec.areas[a].id);
    out.bin_of.push_back(bin);
    out.bin_weight[bin] += specs[a].weight();
  }
  return out;
}

MiniMultiArea build_mini_multiarea(Network& network, const MiniMultiAreaSpec& spec,
                                   const PackingAssignment& assignment) {
  spec.validate();
  MiniMultiArea model;
  model.area_rank = resolve_assignment(spec, assignment, network.rank_count());
  if (network.config().comm_mode == CommMode::Collective) {
    std::vector<Rank> all(network.rank_count());
    for (Rank r = 0; r < all.size(); ++r) all[r] = r;
    model.group = network.create_group(all);
  }
  const std::size_t n_areas = spec.areas.size();
  // Areas are created in area order so gids do not depend on the layout.
  for (std::size_t a = 0; a < n_areas; ++a) {
    model.exc.push_back(network.create_neurons(model.area_rank[a], spec.areas[a].n_exc, spec.neuron));
    model.inh.push_back(network.create_neurons(model.area_rank[a], spec.areas[a].n_inh, spec.neuron));
  }
  const double j = spec.j_exc_mv;
  const double j_inh = -spec.g * spec.j_exc_mv;

  auto area_nodes = [&](std::size_t a) {
    std::vector<NodeIndex> nodes = model.exc[a].indices();
    const auto inh = model.inh[a].indices();
    nodes.insert(nodes.end(), inh.begin(), inh.end());
    return nodes;
  };

  if (!spec.explicit_connectivity) {
    for (std::size_t t = 0; t < n_areas; ++t) {
      const Rank rt = model.area_rank[t];
      const auto targets = area_nodes(t);
      const auto exc_t = model.exc[t].indices();
      const auto inh_t = model.inh[t].indices();
      if (spec.intra_k_exc > 0) {
        network.connect(rt, exc_t, rt, targets, ConnSpec::fixed_indegree(spec.intra_k_exc),
                        SynSpec::fixed(j, spec.intra_delay_steps));
      }
      if (spec.intra_k_inh > 0) {
        network.connect(rt, inh_t, rt, targets, ConnSpec::fixed_indegree(spec.intra_k_inh),
                        SynSpec::fixed(j_inh, spec.intra_delay_steps));
      }
      for (std::size_t s = 0; s < n_areas; ++s) {
        if (s == t || spec.inter_k[t][s] == 0) continue;
        network.connect(model.area_rank[s], model.exc[s].indices(), rt, targets,
                        ConnSpec::fixed_indegree(spec.inter_k[t][s]),
                        SynSpec::fixed(j, spec.inter_delay_steps), 0, model.group);
      }
    }
  } else {
    for (std::size_t t = 0; t < n_areas; ++t) {
      const std::uint32_t ne = spec.areas[t].n_exc;
      const std::uint32_t n_t = ne + spec.areas[t].n_inh;
      RngStream rng(network.config().seed, StreamId::tagged(StreamPurpose::Model, t));
      std::vector<std::vector<Edge>> by_source(n_areas);
      for (std::uint32_t i = 0; i < n_t; ++i) {
        for (std::uint64_t k = 0; k < spec.intra_k_exc; ++k) {
          by_source[t].push_back({static_cast<std::uint32_t>(rng.uniform_index(ne)), i, j,
                                  spec.intra_delay_steps});
        }
        for (std::uint64_t k = 0; k < spec.intra_k_inh; ++k) {
          const auto s = static_cast<std::uint32_t>(ne + rng.uniform_index(spec.areas[t].n_inh));
          by_source[t].push_back({s, i, j_inh, spec.intra_delay_steps});
        }
        for (std::size_t s = 0; s < n_areas; ++s) {
          if (s == t) continue;
          for (std::uint64_t k = 0; k < spec.inter_k[t][s]; ++k) {
            by_source[s].push_back({static_cast<std::uint32_t>(rng.uniform_index(spec.areas[s].n_exc)),
                                    i, j, spec.inter_delay_steps});
          }
        }
      }
      const auto targets = area_nodes(t);
      for (std::size_t s = 0; s < n_areas; ++s) {
        if (by_source[s].empty()) continue;
        const auto sources = area_nodes(s);
        std::vector<NodeIndex> src;
        std::vector<NodeIndex> tgt;
        SynSpec syn;
        for (const Edge& e : by_source[s]) {
          src.push_back(sources[e.source]);
          tgt.push_back(targets[e.target]);
          syn.weights.push_back(e.weight);
          syn.delays.push_back(e.delay);
        }
        network.connect(model.area_rank[s], src, model.area_rank[t], tgt, ConnSpec::assigned_nodes(),
                        syn, 0, s == t ? kPointToPoint : model.group);
      }
    }
  }

  const double rate = spec.external_rate_hz();
  for (std::size_t a = 0; a < n_areas; ++a) {
    for (const NodeRange* range : {&model.exc[a], &model.inh[a]}) {
      if (rate > 0.0) network.attach_poisson(*range, rate, j);
      network.randomize_membrane(*range, spec.v_init_mean, spec.v_init_sd);
    }
  }
  return model;
}

}  // namespace proxysim
