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
#include "proxysim/engine/simulation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {

std::vector<std::pair<Rank, Payload>> route_spikes_p2p(const RankState& rank,
                                                       std::span<const NodeIndex> spiking) {
  const auto& dests = rank.p2p_destinations();
  std::vector<std::pair<Rank, Payload>> packets;
  packets.reserve(dests.size());
  for (Rank d : dests) packets.emplace_back(d, Payload{});
  const auto& routes = rank.p2p_routes();
  for (NodeIndex s : spiking) {
    const auto targets = routes.destinations(s);
    const auto positions = routes.positions(s);
    for (std::size_t j = 0; j < targets.size(); ++j) {
      const auto it = std::lower_bound(dests.begin(), dests.end(), targets[j]);
      packets[static_cast<std::size_t>(it - dests.begin())].second.push_back({positions[j], 1});
    }
  }
  return packets;
}

std::vector<std::pair<GroupId, Payload>> route_spikes_collective(
    const RankState& rank, std::span<const NodeIndex> spiking) {
  const auto& groups = rank.active_groups();
  std::vector<std::pair<GroupId, Payload>> packets;
  packets.reserve(groups.size());
  for (GroupId g : groups) packets.emplace_back(g, Payload{});
  const auto& routes = rank.group_routes();
  for (NodeIndex s : spiking) {
    const auto gs = routes.destinations(s);
    const auto qs = routes.positions(s);
    for (std::size_t j = 0; j < gs.size(); ++j) {
      const auto it = std::lower_bound(groups.begin(), groups.end(), gs[j]);
      packets[static_cast<std::size_t>(it - groups.begin())].second.push_back({qs[j], 1});
    }
  }
  return packets;
}

void expand_node(const RankState& rank, NodeIndex node, std::uint32_t multiplicity,
                 std::vector<DeliveryEvent>& events, DeliveryCounters& counters) {
  const ConnectionStore& store = rank.connections();
  if (rank.kind(node) == NodeKind::Image) {
    const PlacementPlan& plan = rank.placement();
    if (plan.first_index == MemoryKind::Host) ++counters.host_accesses;
    if (plan.store_counts && plan.count_array == MemoryKind::Host) ++counters.host_accesses;
  }
  const SourceRange range = store.range(node);
  for (std::uint64_t i = 0; i < range.count; ++i) {
    const ConnectionRecord& rec = store[range.first + i];
    events.push_back({rec.target, rec.port, rec.delay, rec.weight * multiplicity});
  }
}

void collect_local(const RankState& rank, std::span<const NodeIndex> spiking,
                   std::vector<DeliveryEvent>& events, DeliveryCounters& counters) {
  for (NodeIndex s : spiking) expand_node(rank, s, 1, events, counters);
}

void deliver_remote(const RankState& rank, const Inbox& inbox, std::vector<DeliveryEvent>& events,
                    DeliveryCounters& counters) {
  const auto& expected = rank.p2p_senders();
  bool senders_match = inbox.p2p.size() == expected.size();
  for (std::size_t i = 0; senders_match && i < expected.size(); ++i) {
    senders_match = inbox.p2p[i].src_rank == expected[i];
  }
  if (!senders_match) {
    throw ProtocolError(fmt::format("rank {} received p2p packets from an unexpected set of ranks",
                                    rank.rank()));
  }
  const bool l_on_host = rank.placement().local_image_maps == MemoryKind::Host;

  for (const SpikePacket& packet : inbox.p2p) {
    const auto images = rank.remote_map(kPointToPoint, packet.src_rank)->local();
    for (const SpikeEntry& e : packet.payload) {
      if (e.position >= images.size()) {
        throw ProtocolError(fmt::format("position {} outside the map of rank {} on rank {}",
                                        e.position, packet.src_rank, rank.rank()));
      }
      if (l_on_host) ++counters.host_accesses;
      counters.remote_spikes += e.multiplicity;
      expand_node(rank, images[e.position], e.multiplicity, events, counters);
    }
  }

  for (const GatherPacket& packet : inbox.gather) {
    if (packet.src_rank == rank.rank()) continue;
    const ImageIndexArray* index = rank.image_index(packet.group, packet.src_rank);
    if (index == nullptr) {
      throw ProtocolError(fmt::format("rank {} has no image index for group {}, rank {}",
                                      rank.rank(), packet.group, packet.src_rank));
    }
    for (const SpikeEntry& e : packet.payload) {
      if (e.position >= index->size()) {
        throw ProtocolError(fmt::format("position {} outside host array of group {}, rank {}",
                                        e.position, packet.group, packet.src_rank));
      }
      if (l_on_host) ++counters.host_accesses;
      const std::int64_t image = (*index)[e.position];
      if (image == kNoImage) continue;
      counters.remote_spikes += e.multiplicity;
      expand_node(rank, static_cast<NodeIndex>(image), e.multiplicity, events, counters);
    }
  }
}

void apply_events(RankState& rank, TimeStep now, std::vector<DeliveryEvent>& events) {
  std::sort(events.begin(), events.end(), [](const DeliveryEvent& a, const DeliveryEvent& b) {
    if (a.target != b.target) return a.target < b.target;
    if (a.port != b.port) return a.port < b.port;
    if (a.delay != b.delay) return a.delay < b.delay;
    return a.amount < b.amount;
  });
  SpikeRingBuffer& buffer = rank.input_buffer();
  const std::uint32_t ports = rank.port_count();
  for (const DeliveryEvent& e : events) {
    const std::size_t channel = static_cast<std::size_t>(rank.neuron_slot(e.target)) * ports + e.port;
    buffer.add(channel, now, e.delay, e.amount);
  }
  events.clear();
}

std::vector<NodeIndex> update_neurons(RankState& rank, TimeStep now, double resolution_ms) {
  auto neurons = rank.neurons();
  const auto props = rank.propagators();
  auto& drives = rank.drives();
  SpikeRingBuffer& buffer = rank.input_buffer();
  const std::uint32_t ports = rank.port_count();
  std::vector<NodeIndex> spiking;
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    double input = 0.0;
    for (std::uint32_t p = 0; p < ports; ++p) input += buffer.consume(i * ports + p, now);
    if (drives[i]) {
      input += static_cast<double>(poisson_emit(*drives[i], resolution_ms)) * drives[i]->weight;
    }
    if (lif_update(neurons[i], props[i], input)) spiking.push_back(rank.neuron_node(i));
  }
  return spiking;
}

Simulation::Simulation(Network& network) : network_(network) {
  if (!network_.prepared()) throw StateError("simulation requires a prepared network");
  network_.transport().set_phase(Phase::Propagation);
  events_.resize(network_.rank_count());
}

std::vector<std::vector<NodeIndex>> Simulation::step() {
  const std::uint32_t n = network_.rank_count();
  const double res = network_.config().resolution_ms;
  Transport& transport = network_.transport();
  std::vector<std::vector<NodeIndex>> spikes(n);

  for (Rank r = 0; r < n; ++r) {
    RankState& rank = network_.rank(r);
    spikes[r] = update_neurons(rank, now_, res);
    if (recording_) {
      for (NodeIndex s : spikes[r]) record_.add(rank.gid(s), now_);
    }
    collect_local(rank, spikes[r], events_[r], counters_);
    Outbox out;
    out.p2p = route_spikes_p2p(rank, spikes[r]);
    out.gather = route_spikes_collective(rank, spikes[r]);
    transport.post(r, std::move(out));
  }
  const auto inboxes = transport.complete_round();
  for (Rank r = 0; r < n; ++r) {
    RankState& rank = network_.rank(r);
    deliver_remote(rank, inboxes[r], events_[r], counters_);
    apply_events(rank, now_, events_[r]);
  }
  ++now_;
  return spikes;
}

void Simulation::run_steps(std::int64_t n) {
  for (std::int64_t i = 0; i < n; ++i) step();
}

RunReport Simulation::simulate(double warmup_ms, double model_ms) {
  if (!(warmup_ms >= 0.0) || !(model_ms >= 0.0)) {
    throw InvalidArgument("warmup and model time must be non-negative");
  }
  const double res = network_.config().resolution_ms;
  const auto warmup_steps = static_cast<std::int64_t>(std::llround(warmup_ms / res));
  const auto model_steps = static_cast<std::int64_t>(std::llround(model_ms / res));

  const bool saved = recording_;
  recording_ = false;
  run_steps(warmup_steps);
  recording_ = saved;

  double elapsed = 0.0;
  if (model_steps > 0) {
    const Clock& clock = network_.clock();
    const double start = clock();
    run_steps(model_steps);
    elapsed = clock() - start;
  }
  network_.timers().propagation += elapsed;
  return report(warmup_ms, model_ms, elapsed);
}

RunReport Simulation::report(double warmup_ms, double model_ms, double propagation_s) const {
  RunReport r;
  r.timers = network_.timers();
  r.timers.propagation = propagation_s;
  r.rtf = real_time_factor(propagation_s, model_ms);
  r.warmup_ms = warmup_ms;
  r.model_ms = model_ms;
  const SimConfig& cfg = network_.config();
  r.resolution_ms = cfg.resolution_ms;
  r.steps = static_cast<std::uint64_t>(now_);
  r.n_ranks = network_.rank_count();
  r.comm_mode = std::string(to_string(cfg.comm_mode));
  r.opt_level = cfg.opt_level;
  r.seed = cfg.seed;
  r.neurons = network_.neuron_total();
  r.connections = network_.connection_total();
  for (Rank k = 0; k < network_.rank_count(); ++k) {
    const RankState& rank = network_.rank(k);
    r.image_nodes += rank.image_count();
    const Arenas& a = rank.arenas();
    r.arenas.push_back({k, a.host.peak_bytes(), a.device.peak_bytes(), a.host.current_bytes(),
                        a.device.current_bytes()});
  }
  r.spike_count = record_.spike_count();
  r.raster_hash = record_.hash();
  r.host_accesses = counters_.host_accesses;
  r.transport = network_.transport().stats_snapshot();
  return r;
}

}  // namespace proxysim
