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
#include <span>
#include <utility>
#include <vector>

#include "proxysim/construction/network.hpp"
#include "proxysim/construction/rank_state.hpp"
#include "proxysim/dynamics/spike_record.hpp"
#include "proxysim/engine/report.hpp"
#include "proxysim/transport/transport.hpp"

namespace proxysim {

/// A weighted input bound for one target channel, `delay` steps from now.
struct DeliveryEvent {
  NodeIndex target = 0;
  ReceptorPort port = 0;
  std::uint32_t delay = 1;
  double amount = 0.0;
  friend bool operator==(const DeliveryEvent&, const DeliveryEvent&) = default;
};

/// Reads of host-placed structures during delivery.
struct DeliveryCounters {
  std::uint64_t host_accesses = 0;
  std::uint64_t remote_spikes = 0;
};

/// One packet per destination rank with a non-empty S sequence, in ascending
/// destination order; each spiking neuron contributes (P, multiplicity) to the
/// packet of every rank in its T list.
std::vector<std::pair<Rank, Payload>> route_spikes_p2p(const RankState& rank,
                                                       std::span<const NodeIndex> spiking);

/// One packet per active group of the rank, built from G/Q.
std::vector<std::pair<GroupId, Payload>> route_spikes_collective(const RankState& rank,
                                                                 std::span<const NodeIndex> spiking);

/// Appends the events of a node's outgoing connections, scaled by multiplicity.
void expand_node(const RankState& rank, NodeIndex node, std::uint32_t multiplicity,
                 std::vector<DeliveryEvent>& events, DeliveryCounters& counters);

/// Events caused by spikes of the rank's own neurons.
void collect_local(const RankState& rank, std::span<const NodeIndex> spiking,
                   std::vector<DeliveryEvent>& events, DeliveryCounters& counters);

/// Resolves received positions to image nodes (through L, or I for groups)
/// and appends the images' events. Throws ProtocolError for unexpected
/// senders or positions outside a map.
void deliver_remote(const RankState& rank, const Inbox& inbox, std::vector<DeliveryEvent>& events,
                    DeliveryCounters& counters);

/// Adds events to the input buffer in a canonical order that does not depend
/// on how the network is split across ranks, so accumulated sums are
/// bit-identical for every layout.
void apply_events(RankState& rank, TimeStep now, std::vector<DeliveryEvent>& events);

/// Advances one rank's neurons by one step and returns the spiking nodes in
/// ascending order.
std::vector<NodeIndex> update_neurons(RankState& rank, TimeStep now, double resolution_ms);

/// Drives a prepared network step by step.
class Simulation {
 public:
  /// Throws StateError unless the network is prepared.
  explicit Simulation(Network& network);

  /// Runs step `now()` on every rank, including one transport round, and
  /// returns the spiking nodes per rank.
  std::vector<std::vector<NodeIndex>> step();
  [[nodiscard]] TimeStep now() const noexcept { return now_; }

  void set_recording(bool enabled) noexcept { recording_ = enabled; }
  [[nodiscard]] bool recording() const noexcept { return recording_; }
  [[nodiscard]] const SpikeRecord& record() const noexcept { return record_; }
  [[nodiscard]] const DeliveryCounters& counters() const noexcept { return counters_; }

  /// Warmup with recording off, then the measured interval with recording as
  /// configured. The propagation timer covers the measured interval only.
  RunReport simulate(double warmup_ms, double model_ms);

  /// Report for the current state, with `propagation_s` over `model_ms`.
  [[nodiscard]] RunReport report(double warmup_ms, double model_ms, double propagation_s) const;

 private:
  void run_steps(std::int64_t n);

  Network& network_;
  TimeStep now_ = 0;
  bool recording_ = true;
  SpikeRecord record_;
  DeliveryCounters counters_;
  std::vector<std::vector<DeliveryEvent>> events_;
};

}  // namespace proxysim
