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
// Fixtures and independent oracles shared by the unit tests and the
// acceptance runner. Oracles here deliberately avoid the library code paths
// they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "proxysim/construction/network.hpp"
#include "proxysim/core/rng.hpp"
#include "proxysim/engine/simulation.hpp"

namespace proxysim::testing {

inline std::vector<NodeIndex> iota_nodes(NodeIndex first, std::uint32_t n) {
  std::vector<NodeIndex> v(n);
  std::iota(v.begin(), v.end(), first);
  return v;
}

// ---------------------------------------------------------------------------
// Worked delivery example: rank 0 neurons 480 and 742 have images on rank 1
// (map positions 127 and 271, image nodes 357 and 698) and 742 also on rank 2
// (position 113). Image 357 feeds targets 126 and 308 with delays 2 and 5,
// image 698 feeds target 243 with delay 3.
// ---------------------------------------------------------------------------
struct WorkedExample {
  static constexpr double w_126 = 1.5;
  static constexpr double w_308 = -0.75;
  static constexpr double w_243 = 2.25;
  static constexpr double w_rank2 = 0.5;
};

inline void connect_batch(Network& net, Rank s, std::vector<NodeIndex> sources, Rank t,
                          NodeIndex target, double weight = 0.0, std::uint32_t delay = 1) {
  std::vector<NodeIndex> targets(sources.size(), target);
  SynSpec syn = SynSpec::fixed(weight, delay);
  net.connect(s, sources, t, targets, ConnSpec::assigned_nodes(), syn);
}

/// Builds the example on a 3-rank network. Rank 1 has 320 neurons, so its
/// images start at 320; the call order below places the images of 480 and 742
/// at 357 and 698 and their map positions at 127 and 271.
inline void build_worked_example(Network& net) {
  net.create_neurons(0, 1000);
  net.create_neurons(1, 320);
  net.create_neurons(2, 10);
  auto range = [](NodeIndex lo, NodeIndex hi) { return iota_nodes(lo, hi - lo); };
  // 37 sources below 480 -> images 320..356.
  connect_batch(net, 0, range(0, 37), 1, 0);
  // 480 -> image 357, two connections.
  {
    std::vector<NodeIndex> s{480, 480};
    std::vector<NodeIndex> t{126, 308};
    SynSpec syn;
    syn.weights = {WorkedExample::w_126, WorkedExample::w_308};
    syn.delays = {2, 5};
    net.connect(0, s, 1, t, ConnSpec::assigned_nodes(), syn);
  }
  // 90 more below 480, 143 between 480 and 742, 107 above 742 -> images 358..697.
  {
    auto s = range(37, 127);
    const auto mid = range(481, 624);
    const auto high = range(743, 850);
    s.insert(s.end(), mid.begin(), mid.end());
    s.insert(s.end(), high.begin(), high.end());
    connect_batch(net, 0, s, 1, 0);
  }
  // 742 -> image 698, one connection.
  connect_batch(net, 0, {742}, 1, 243, WorkedExample::w_243, 3);
  // Rank 2: 113 sources below 742, then 742.
  connect_batch(net, 0, range(0, 113), 2, 0);
  connect_batch(net, 0, {742}, 2, 5, WorkedExample::w_rank2, 4);
}

// ---------------------------------------------------------------------------
// Explicit network for layout-equivalence runs.
// ---------------------------------------------------------------------------
struct ExplicitEdge {
  Gid source;
  Gid target;
  double weight;
  std::uint32_t delay;
};

/// Random edges among n neurons, drawn from a test-only stream.
inline std::vector<ExplicitEdge> random_explicit_edges(std::uint32_t n, std::size_t m,
                                                       std::uint64_t seed,
                                                       std::uint32_t max_delay = 10) {
  RngStream rng(seed, StreamId::tagged(StreamPurpose::Model, 0xfeed));
  std::vector<ExplicitEdge> edges;
  edges.reserve(m);
  const std::uint32_t n_exc = n * 4 / 5;
  for (std::size_t i = 0; i < m; ++i) {
    const Gid s = rng.uniform_index(n);
    const Gid t = rng.uniform_index(n);
    const double w = s < n_exc ? 0.6 + 0.2 * rng.uniform() : -2.5 - rng.uniform();
    const auto d = static_cast<std::uint32_t>(1 + rng.uniform_index(max_delay));
    edges.push_back({s, t, w, d});
  }
  return edges;
}

struct ExplicitRun {
  RunReport report;
  SpikeRecord raster;
};

/// Neurons are split into equal consecutive blocks, one per rank; edges are
/// emitted as assigned-nodes batches per ordered rank pair, in edge order.
inline ExplicitRun run_explicit(std::uint32_t n_ranks, CommMode mode, int level,
                                const std::vector<ExplicitEdge>& edges, std::uint32_t n,
                                std::int64_t steps, std::uint64_t seed, double drive_hz = 9000.0) {
  SimConfig cfg;
  cfg.n_ranks = n_ranks;
  cfg.comm_mode = mode;
  cfg.opt_level = level;
  cfg.seed = seed;
  Network net(cfg);
  GroupId group = kPointToPoint;
  if (mode == CommMode::Collective) {
    std::vector<Rank> all(n_ranks);
    std::iota(all.begin(), all.end(), 0);
    group = net.create_group(all);
  }
  const std::uint32_t per_rank = n / n_ranks;
  std::vector<NodeRange> ranges;
  for (Rank r = 0; r < n_ranks; ++r) ranges.push_back(net.create_neurons(r, per_rank));
  auto rank_of = [&](Gid g) { return static_cast<Rank>(g / per_rank); };
  auto local_of = [&](Gid g) { return static_cast<NodeIndex>(g % per_rank); };

  std::map<std::pair<Rank, Rank>, std::pair<std::vector<NodeIndex>, std::vector<NodeIndex>>> nodes;
  std::map<std::pair<Rank, Rank>, SynSpec> syns;
  for (const ExplicitEdge& e : edges) {
    const auto key = std::pair{rank_of(e.source), rank_of(e.target)};
    nodes[key].first.push_back(local_of(e.source));
    nodes[key].second.push_back(local_of(e.target));
    syns[key].weights.push_back(e.weight);
    syns[key].delays.push_back(e.delay);
  }
  for (const auto& [key, st] : nodes) {
    net.connect(key.first, st.first, key.second, st.second, ConnSpec::assigned_nodes(), syns[key],
                0, key.first == key.second ? kPointToPoint : group);
  }
  for (const NodeRange& r : ranges) {
    net.attach_poisson(r, drive_hz, 0.1);
    net.randomize_membrane(r, 5.0, 4.0);
  }
  net.prepare();
  Simulation sim(net);
  ExplicitRun out;
  const double ms = static_cast<double>(steps) * cfg.resolution_ms;
  out.report = sim.simulate(0.0, ms);
  out.raster = sim.record();
  return out;
}

/// Global in-degree of every neuron gid, by scanning every rank's store.
inline std::map<Gid, std::uint64_t> global_indegrees(const Network& net) {
  std::map<Gid, std::uint64_t> deg;
  for (Rank r = 0; r < net.rank_count(); ++r) {
    const RankState& rs = net.rank(r);
    const ConnectionStore& store = rs.connections();
    for (std::size_t i = 0; i < store.size(); ++i) ++deg[rs.gid(store[i].target)];
  }
  return deg;
}

/// True iff every source-side sequence S equals the R array of the matching
/// point-to-point map on the target rank, and no map lacks its sequence.
inline bool sequences_match_maps(const Network& net) {
  for (Rank sigma = 0; sigma < net.rank_count(); ++sigma) {
    for (const auto& [tau, seq] : net.rank(sigma).source_sequences()) {
      const RemoteSourceMap* map = net.rank(tau).remote_map(kPointToPoint, sigma);
      const auto s = seq.values();
      if (map == nullptr) {
        if (!s.empty()) return false;
        continue;
      }
      const auto r = map->remote();
      if (!std::equal(s.begin(), s.end(), r.begin(), r.end())) return false;
    }
  }
  for (Rank tau = 0; tau < net.rank_count(); ++tau) {
    for (const auto& [key, map] : net.rank(tau).remote_maps()) {
      if (key.first != kPointToPoint || map.empty()) continue;
      if (net.rank(key.second).source_sequence(tau) == nullptr) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Packing oracle: exhaustive search over assignments with bin-symmetry
// breaking and bound pruning. Exact.
// ---------------------------------------------------------------------------
inline std::uint64_t optimal_max_load(std::vector<std::uint64_t> weights, std::uint32_t bins) {
  std::sort(weights.rbegin(), weights.rend());
  std::vector<std::uint64_t> load(bins, 0);
  std::uint64_t best = std::accumulate(weights.begin(), weights.end(), std::uint64_t{0});
  std::function<void(std::size_t, std::uint32_t)> go = [&](std::size_t i, std::uint32_t used) {
    if (i == weights.size()) {
      best = std::min(best, *std::max_element(load.begin(), load.end()));
      return;
    }
    const std::uint32_t limit = std::min(bins, used + 1);
    for (std::uint32_t b = 0; b < limit; ++b) {
      if (load[b] + weights[i] >= best) continue;
      load[b] += weights[i];
      go(i + 1, std::max(used, b + 1));
      load[b] -= weights[i];
    }
  };
  go(0, 0);
  return best;
}

// ---------------------------------------------------------------------------
// Optimal-transport oracle: successive shortest paths on the bipartite
// transport network with integer masses (a atoms carry |b|, b atoms |a|).
// ---------------------------------------------------------------------------
inline double transport_plan_emd(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t V = n + m + 2;
  const std::size_t src = n + m;
  const std::size_t snk = n + m + 1;
  struct Arc {
    std::size_t to;
    std::int64_t cap;
    double cost;
    std::size_t rev;
  };
  std::vector<std::vector<Arc>> g(V);
  auto add = [&](std::size_t u, std::size_t v, std::int64_t cap, double cost) {
    g[u].push_back({v, cap, cost, g[v].size()});
    g[v].push_back({u, 0, -cost, g[u].size() - 1});
  };
  for (std::size_t i = 0; i < n; ++i) add(src, i, static_cast<std::int64_t>(m), 0.0);
  for (std::size_t j = 0; j < m; ++j) add(n + j, snk, static_cast<std::int64_t>(n), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      add(i, n + j, static_cast<std::int64_t>(n * m), std::fabs(a[i] - b[j]));
    }
  }
  std::int64_t remaining = static_cast<std::int64_t>(n * m);
  double total = 0.0;
  while (remaining > 0) {
    std::vector<double> dist(V, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> pv(V), pe(V);
    dist[src] = 0.0;
    for (std::size_t it = 0; it < V; ++it) {
      bool changed = false;
      for (std::size_t u = 0; u < V; ++u) {
        if (std::isinf(dist[u])) continue;
        for (std::size_t k = 0; k < g[u].size(); ++k) {
          const Arc& e = g[u][k];
          if (e.cap > 0 && dist[u] + e.cost < dist[e.to] - 1e-15) {
            dist[e.to] = dist[u] + e.cost;
            pv[e.to] = u;
            pe[e.to] = k;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    std::int64_t push = remaining;
    for (std::size_t v = snk; v != src; v = pv[v]) push = std::min(push, g[pv[v]][pe[v]].cap);
    for (std::size_t v = snk; v != src; v = pv[v]) {
      Arc& e = g[pv[v]][pe[v]];
      e.cap -= push;
      g[v][e.rev].cap += push;
      total += static_cast<double>(push) * e.cost;
    }
    remaining -= push;
  }
  return total / static_cast<double>(n * m);
}

}  // namespace proxysim::testing
