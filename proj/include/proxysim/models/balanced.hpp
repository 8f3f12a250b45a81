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
#pragma once

#include <cstdint>
#include <vector>

#include "proxysim/construction/network.hpp"
#include "proxysim/dynamics/lif.hpp"

namespace proxysim {

/// Two-population random balanced network with fixed in-degree. Sizes scale
/// per rank: every rank holds (base_exc + base_inh) * scale neurons.
struct BalancedNetSpec {
  double scale = 1.0;
  std::uint32_t n_ranks = 1;
  std::uint32_t base_exc = 9000;
  std::uint32_t base_inh = 2250;
  std::uint64_t k_in_exc = 9000;
  std::uint64_t k_in_inh = 2250;

  LifParams neuron;
  double j_exc_mv = 0.5;       // excitatory weight
  double g = 6.0;              // relative inhibitory strength
  double eta = 0.85;           // external rate over threshold rate
  std::uint32_t delay_steps = 15;
  double v_init_mean = 10.0;
  double v_init_sd = 5.0;

  /// Desk-scale variant: 800 + 200 neurons per rank and 80 + 20 in-degree.
  static BalancedNetSpec desk(std::uint32_t n_ranks);

  void validate() const;
  [[nodiscard]] std::uint64_t k_in_total() const noexcept { return k_in_exc + k_in_inh; }
  /// External Poisson rate per neuron (Hz) that puts eta times the threshold
  /// drive on each neuron.
  [[nodiscard]] double external_rate_hz() const noexcept;
};

struct BalancedNetSize {
  std::uint64_t exc_per_rank = 0;
  std::uint64_t inh_per_rank = 0;
  std::uint64_t neurons_per_rank = 0;
  std::uint64_t neurons = 0;
  std::uint64_t synapses = 0;
};

/// Size arithmetic only; allocates nothing. Throws InvalidArgument if the
/// scale does not give whole populations.
BalancedNetSize balanced_network_size(const BalancedNetSpec& spec);

struct BalancedNetwork {
  std::vector<NodeRange> exc;  // one per rank
  std::vector<NodeRange> inh;
  GroupId group = kPointToPoint;
};

/// Builds the model on `network`. Collective mode uses one group spanning all ranks.
BalancedNetwork build_balanced_network(Network& network, const BalancedNetSpec& spec);

}  // namespace proxysim
