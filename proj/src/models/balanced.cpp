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
#include "proxysim/models/balanced.hpp"

#include <cmath>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {
namespace {

std::uint64_t scaled_count(std::uint32_t base, double scale, const char* what) {
  const double exact = static_cast<double>(base) * scale;
  const double rounded = std::round(exact);
  if (std::fabs(exact - rounded) > 1e-9 * std::max(1.0, exact)) {
    throw InvalidArgument(fmt::format("scale {} gives a fractional {} population ({})", scale,
                                      what, exact));
  }
  return static_cast<std::uint64_t>(rounded);
}

}  // namespace

BalancedNetSpec BalancedNetSpec::desk(std::uint32_t n_ranks) {
  BalancedNetSpec spec;
  spec.n_ranks = n_ranks;
  spec.base_exc = 800;
  spec.base_inh = 200;
  spec.k_in_exc = 80;
  spec.k_in_inh = 20;
  return spec;
}

void BalancedNetSpec::validate() const {
  if (!(scale > 0.0)) throw InvalidArgument("scale must be positive");
  if (n_ranks == 0) throw InvalidArgument("n_ranks must be positive");
  if (base_exc == 0 || base_inh == 0) throw InvalidArgument("both populations must be non-empty");
  if (k_in_exc == 0 && k_in_inh == 0) throw InvalidArgument("in-degree must be positive");
  if (delay_steps < 1) throw InvalidArgument("delay must be at least one step");
  if (!(eta >= 0.0)) throw InvalidArgument("eta must be non-negative");
  if (!(v_init_sd >= 0.0)) throw InvalidArgument("initial potential spread must be non-negative");
  neuron.validate();
  scaled_count(base_exc, scale, "excitatory");
  scaled_count(base_inh, scale, "inhibitory");
}

double BalancedNetSpec::external_rate_hz() const noexcept {
  if (k_in_exc == 0 || j_exc_mv <= 0.0) return 0.0;
  // Rate at which k_in_exc inputs of weight J bring the free membrane to threshold.
  const double nu_thr_per_ms =
      (neuron.V_th - neuron.V_rest) / (j_exc_mv * static_cast<double>(k_in_exc) * neuron.tau_m);
  return eta * nu_thr_per_ms * static_cast<double>(k_in_exc) * 1000.0;
}

BalancedNetSize balanced_network_size(const BalancedNetSpec& spec) {
  if (!(spec.scale > 0.0) || spec.n_ranks == 0) {
    throw InvalidArgument("scale and rank count must be positive");
  }
  BalancedNetSize size;
  size.exc_per_rank = scaled_count(spec.base_exc, spec.scale, "excitatory");
  size.inh_per_rank = scaled_count(spec.base_inh, spec.scale, "inhibitory");
  size.neurons_per_rank = size.exc_per_rank + size.inh_per_rank;
  size.neurons = size.neurons_per_rank * spec.n_ranks;
  size.synapses = size.neurons * spec.k_in_total();
  return size;
}

BalancedNetwork build_balanced_network(Network& network, const BalancedNetSpec& spec) {
  spec.validate();
  if (spec.n_ranks != network.rank_count()) {
    throw InvalidArgument(fmt::format("model expects {} ranks, network has {}", spec.n_ranks,
                                      network.rank_count()));
  }
  const BalancedNetSize size = balanced_network_size(spec);
  BalancedNetwork model;
  if (network.config().comm_mode == CommMode::Collective) {
    std::vector<Rank> all(network.rank_count());
    for (Rank r = 0; r < all.size(); ++r) all[r] = r;
    model.group = network.create_group(all);
  }
  for (Rank r = 0; r < network.rank_count(); ++r) {
    model.exc.push_back(
        network.create_neurons(r, static_cast<std::uint32_t>(size.exc_per_rank), spec.neuron));
    model.inh.push_back(
        network.create_neurons(r, static_cast<std::uint32_t>(size.inh_per_rank), spec.neuron));
  }
  std::vector<NodeRange> all = model.exc;
  all.insert(all.end(), model.inh.begin(), model.inh.end());

  if (spec.k_in_exc > 0) {
    network.connect_fixed_indegree(model.exc, all, spec.k_in_exc,
                                   SynSpec::fixed(spec.j_exc_mv, spec.delay_steps), 0, model.group);
  }
  if (spec.k_in_inh > 0) {
    network.connect_fixed_indegree(model.inh, all, spec.k_in_inh,
                                   SynSpec::fixed(-spec.g * spec.j_exc_mv, spec.delay_steps), 0,
                                   model.group);
  }
  const double rate = spec.external_rate_hz();
  for (const NodeRange& range : all) {
    if (rate > 0.0) network.attach_poisson(range, rate, spec.j_exc_mv);
    network.randomize_membrane(range, spec.v_init_mean, spec.v_init_sd);
  }
  return model;
}

}  // namespace proxysim
