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
#include <string>
#include <vector>

#include "proxysim/construction/network.hpp"
#include "proxysim/dynamics/lif.hpp"
#include "proxysim/models/packing.hpp"

namespace proxysim {

struct MiniArea {
  std::string id;
  std::uint32_t n_exc = 800;
  std::uint32_t n_inh = 200;
};

/// Synthetic multi-area network: each area is a small balanced E/I network
/// with dense internal fixed in-degree wiring, plus excitatory projections
/// between areas given by a user-supplied in-degree matrix.
struct MiniMultiAreaSpec {
  std::vector<MiniArea> areas;
  /// inter_k[t][s]: excitatory in-degree of every neuron of area t from area s.
  /// The diagonal is ignored.
  std::vector<std::vector<std::uint64_t>> inter_k;
  std::uint64_t intra_k_exc = 80;
  std::uint64_t intra_k_inh = 20;

  LifParams neuron;
  double j_exc_mv = 0.5;
  double g = 6.0;
  double eta = 0.8;
  std::uint32_t intra_delay_steps = 15;
  std::uint32_t inter_delay_steps = 30;
  double v_init_mean = 10.0;
  double v_init_sd = 5.0;

  /// Draw all edges from per-area model streams and emit them as
  /// assigned-nodes batches. The resulting connectivity does not depend on
  /// how areas are laid out over ranks.
  bool explicit_connectivity = false;

  /// n equal areas with the same in-degree between every ordered pair.
  static MiniMultiAreaSpec uniform(std::uint32_t n_areas, std::uint32_t n_exc,
                                   std::uint32_t n_inh, std::uint64_t inter_k);

  void validate() const;
  /// Sizes and incoming-connection counts for the packer.
  [[nodiscard]] std::vector<AreaSpec> area_specs() const;
  [[nodiscard]] double external_rate_hz() const noexcept;
};

/// Area i goes to rank i mod n_ranks.
PackingAssignment round_robin_assignment(const MiniMultiAreaSpec& spec, std::uint32_t n_ranks);

struct MiniMultiArea {
  std::vector<Rank> area_rank;
  std::vector<NodeRange> exc;  // per area
  std::vector<NodeRange> inh;
  GroupId group = kPointToPoint;
};

/// Throws InvalidArgument if the assignment names an unknown area, misses
/// one, or uses a bin outside the network's ranks.
MiniMultiArea build_mini_multiarea(Network& network, const MiniMultiAreaSpec& spec,
                                   const PackingAssignment& assignment);

}  // namespace proxysim
