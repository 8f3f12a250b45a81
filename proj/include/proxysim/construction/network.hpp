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
#include <memory>
#include <span>
#include <vector>

#include "proxysim/construction/conn_spec.hpp"
#include "proxysim/construction/rank_state.hpp"
#include "proxysim/core/config.hpp"
#include "proxysim/core/ids.hpp"
#include "proxysim/core/timing.hpp"
#include "proxysim/transport/transport.hpp"

namespace proxysim {

/// Neurons created by one script-level call on one rank.
struct NodeRange {
  Rank rank = 0;
  NodeIndex first = 0;
  std::uint32_t count = 0;
  Gid first_gid = 0;

  [[nodiscard]] PopulationSlice slice() const noexcept { return {rank, first, count}; }
  [[nodiscard]] std::vector<NodeIndex> indices() const;
};

/// The construction script as seen by every rank. Each call is handed to
/// all ranks, which execute their own share of it; no rank reads another's
/// state and the transport stays silent until propagation.
class Network {
 public:
  explicit Network(const SimConfig& config, Clock clock = steady_seconds);

  [[nodiscard]] const SimConfig& config() const noexcept { return config_; }
  [[nodiscard]] std::uint32_t rank_count() const noexcept {
    return static_cast<std::uint32_t>(ranks_.size());
  }
  [[nodiscard]] RankState& rank(Rank r) { return *ranks_.at(r); }
  [[nodiscard]] const RankState& rank(Rank r) const { return *ranks_.at(r); }
  [[nodiscard]] Transport& transport() noexcept { return *transport_; }
  [[nodiscard]] const Transport& transport() const noexcept { return *transport_; }
  [[nodiscard]] PhaseTimers& timers() noexcept { return timers_; }
  [[nodiscard]] const PhaseTimers& timers() const noexcept { return timers_; }
  [[nodiscard]] const Clock& clock() const noexcept { return clock_; }

  GroupId create_group(std::vector<Rank> members);

  /// Neurons get consecutive gids in creation order. Throws StateError once
  /// the rank holds image nodes, because other ranks could no longer agree on
  /// the new index range.
  NodeRange create_neurons(Rank r, std::uint32_t n, const LifParams& params = {});

  /// Local Connect when source == target rank, RemoteConnect otherwise.
  /// Returns the number of connections created.
  std::size_t connect(Rank source_rank, std::span<const NodeIndex> sources, Rank target_rank,
                      std::span<const NodeIndex> targets, const ConnSpec& conn, const SynSpec& syn,
                      ReceptorPort port = 0, GroupId group = kPointToPoint);

  /// Fixed in-degree over populations spread across ranks.
  std::size_t connect_fixed_indegree(std::span<const NodeRange> sources,
                                     std::span<const NodeRange> targets, std::uint64_t indegree,
                                     const SynSpec& syn, ReceptorPort port = 0,
                                     GroupId group = kPointToPoint);

  void attach_poisson(const NodeRange& range, double rate_hz, double weight);
  /// Initial membrane potentials drawn from N(mean, sd), one stream per gid.
  void randomize_membrane(const NodeRange& range, double mean, double sd);

  void prepare();
  [[nodiscard]] bool prepared() const noexcept { return prepared_; }

  [[nodiscard]] Gid neuron_total() const noexcept { return next_gid_; }
  [[nodiscard]] std::uint64_t connection_total() const noexcept;

 private:
  void require_constructing() const;

  SimConfig config_;
  Clock clock_;
  PhaseTimers timers_;
  std::unique_ptr<Transport> transport_;
  std::vector<std::unique_ptr<RankState>> ranks_;
  std::vector<std::vector<Rank>> groups_;
  Gid next_gid_ = 0;
  bool prepared_ = false;
};

}  // namespace proxysim
