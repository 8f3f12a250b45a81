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
#include "proxysim/construction/rank_state.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {
namespace {

constexpr std::uint32_t kNoSlot = std::numeric_limits<std::uint32_t>::max();

void check_explicit_arrays(const SynSpec& syn, std::uint64_t expected) {
  if (!syn.weights.empty() && syn.weights.size() != expected) {
    throw InvalidArgument(fmt::format("{} explicit weights given for {} connections",
                                      syn.weights.size(), expected));
  }
  if (!syn.delays.empty() && syn.delays.size() != expected) {
    throw InvalidArgument(fmt::format("{} explicit delays given for {} connections",
                                      syn.delays.size(), expected));
  }
}

bool has_explicit_arrays(const SynSpec& syn) noexcept {
  return !syn.weights.empty() || !syn.delays.empty();
}

}  // namespace

RankSettings RankSettings::from_config(const SimConfig& config, Rank rank) {
  RankSettings s;
  s.rank = rank;
  s.n_ranks = config.n_ranks;
  s.seed = config.seed;
  s.block_size = config.block_size;
  s.flag_threshold = config.flag_threshold;
  s.opt_level = config.opt_level;
  s.device_cap_bytes = config.device_cap_bytes;
  return s;
}

std::vector<SourceTriplet> draw_distributed_triplets(std::uint64_t seed, std::uint64_t call_index,
                                                     std::size_t slice_index,
                                                     const PopulationSlice& target_slice,
                                                     std::span<const PopulationSlice> sources,
                                                     std::uint64_t indegree) {
  std::vector<std::uint64_t> prefix(sources.size() + 1, 0);
  for (std::size_t i = 0; i < sources.size(); ++i) prefix[i + 1] = prefix[i] + sources[i].count;
  const std::uint64_t total = prefix.back();
  if (total == 0) throw InvalidArgument("fixed in-degree needs a non-empty source population");
  if (indegree == 0) throw InvalidArgument("fixed in-degree needs a positive in-degree");

  RngStream rng(seed, StreamId::tagged(StreamPurpose::DistributedRule, call_index, slice_index));
  std::vector<SourceTriplet> triplets;
  triplets.reserve(static_cast<std::size_t>(target_slice.count * indegree));
  for (std::uint32_t t = 0; t < target_slice.count; ++t) {
    for (std::uint64_t k = 0; k < indegree; ++k) {
      const std::uint64_t u = rng.uniform_index(total);
      const auto j = static_cast<std::size_t>(
          std::upper_bound(prefix.begin(), prefix.end(), u) - prefix.begin() - 1);
      triplets.push_back({sources[j].rank, static_cast<NodeIndex>(sources[j].first + (u - prefix[j])),
                          target_slice.first + t});
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const SourceTriplet& a, const SourceTriplet& b) {
                     return a.source_rank != b.source_rank ? a.source_rank < b.source_rank
                                                           : a.source < b.source;
                   });
  return triplets;
}

RankState::RankState(const RankSettings& settings)
    : settings_(settings),
      placement_(apply_optimization_level(settings.opt_level)),
      store_(settings.block_size, &arenas_.device) {
  if (settings_.n_ranks == 0 || settings_.rank >= settings_.n_ranks) {
    throw InvalidArgument(fmt::format("rank {} outside [0, {})", settings_.rank, settings_.n_ranks));
  }
  arenas_.device = MemoryArena(MemoryKind::Device, settings_.device_cap_bytes);
}

void RankState::require_constructing(const char* what) const {
  if (prepared_) throw StateError(fmt::format("{} is not allowed after preparation", what));
}

void RankState::charge(MemoryKind kind, std::uint64_t bytes) { arenas_.of(kind).alloc(bytes); }

std::uint64_t RankState::blocked(std::size_t entries) const noexcept {
  const std::size_t bs = settings_.block_size;
  return static_cast<std::uint64_t>((entries + bs - 1) / bs * bs);
}

void RankState::declare_group(GroupId group, std::vector<Rank> members) {
  require_constructing("declaring a group");
  if (group != static_cast<GroupId>(groups_.size())) {
    throw InvalidArgument(fmt::format("group ids must be consecutive; expected {}, got {}",
                                      groups_.size(), group));
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) throw InvalidArgument("a group needs at least one member");
  if (members.back() >= settings_.n_ranks) {
    throw InvalidArgument(fmt::format("group member {} outside [0, {})", members.back(),
                                      settings_.n_ranks));
  }
  groups_.push_back(std::move(members));
}

bool RankState::in_group(GroupId group, Rank r) const {
  if (group < 0 || group >= static_cast<GroupId>(groups_.size())) return false;
  const auto& m = groups_[static_cast<std::size_t>(group)];
  return std::binary_search(m.begin(), m.end(), r);
}

NodeIndex RankState::create_neurons(std::uint32_t n, const LifParams& params, Gid first_gid) {
  require_constructing("creating neurons");
  if (n == 0) throw InvalidArgument("create_neurons needs n >= 1");
  params.validate();
  charge(MemoryKind::Device, static_cast<std::uint64_t>(n) * ByteCosts::neuron_state);
  const NodeIndex first = node_count();
  for (std::uint32_t i = 0; i < n; ++i) {
    kinds_.push_back(NodeKind::Neuron);
    gids_.push_back(first_gid + i);
    neuron_slot_.push_back(static_cast<std::uint32_t>(neurons_.size()));
    neurons_.push_back({params, params.V_rest, 0});
    neuron_nodes_.push_back(first + i);
    drives_.emplace_back();
  }
  return first;
}

void RankState::check_neurons(std::span<const NodeIndex> nodes, const char* role) const {
  for (NodeIndex n : nodes) {
    if (n >= kinds_.size() || kinds_[n] != NodeKind::Neuron) {
      throw InvalidArgument(
          fmt::format("{} index {} is not a neuron of rank {}", role, n, settings_.rank));
    }
  }
}

void RankState::check_group(GroupId group, Rank source, Rank target) const {
  if (group < kPointToPoint || group >= static_cast<GroupId>(groups_.size())) {
    throw InvalidArgument(fmt::format("group {} is not defined", group));
  }
  if (group >= 0 && (!in_group(group, source) || !in_group(group, target))) {
    throw InvalidArgument(
        fmt::format("ranks {} and {} must both belong to group {}", source, target, group));
  }
}

void RankState::append_records(std::span<const Pending> pending, const SynSpec& syn,
                               ReceptorPort port) {
  const bool draw_weight = syn.weights.empty() && syn.weight.kind != ParamDist::Kind::Constant;
  const bool draw_delay = syn.delays.empty() && syn.delay_min != syn.delay_max;
  std::optional<RngStream> rng;
  if (draw_weight || draw_delay) {
    rng.emplace(settings_.seed, StreamId::tagged(StreamPurpose::SynapseParams, settings_.rank),
                synapse_calls_++);
  }
  for (const Pending& p : pending) {
    ConnectionRecord rec;
    rec.source = p.source;
    rec.target = p.target;
    rec.port = port;
    rec.weight = !syn.weights.empty() ? syn.weights[p.param]
                 : draw_weight        ? syn.weight.draw(*rng)
                                      : syn.weight.a;
    if (!syn.delays.empty()) {
      rec.delay = syn.delays[p.param];
    } else if (draw_delay) {
      rec.delay = syn.delay_min +
                  static_cast<std::uint32_t>(rng->uniform_index(syn.delay_max - syn.delay_min + 1));
    } else {
      rec.delay = syn.delay_min;
    }
    store_.append(rec);
    max_delay_ = std::max(max_delay_, rec.delay);
  }
  n_ports_ = std::max<std::uint32_t>(n_ports_, static_cast<std::uint32_t>(port) + 1);
}

std::size_t RankState::connect_local(std::span<const NodeIndex> sources,
                                     std::span<const NodeIndex> targets, const ConnSpec& conn,
                                     const SynSpec& syn, ReceptorPort port) {
  require_constructing("connecting");
  conn.validate(sources.size(), targets.size());
  syn.validate();
  check_neurons(sources, "source");
  check_neurons(targets, "target");
  if (has_explicit_arrays(syn)) {
    if (!conn.allow_autapses) {
      throw InvalidArgument("explicit synapse arrays cannot be combined with autapse filtering");
    }
    check_explicit_arrays(syn, expected_connection_count(conn, sources.size(), targets.size()));
  }

  std::vector<Pending> pending;
  if (conn.rule == ConnRule::AssignedNodes) {
    pending.reserve(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i) {
      if (!conn.allow_autapses && sources[i] == targets[i]) continue;
      pending.push_back({sources[i], targets[i], i});
    }
  } else {
    RngStream rng(settings_.seed, StreamId::tagged(StreamPurpose::LocalConnect, settings_.rank),
                  local_calls_++);
    PairFilter forbidden;
    if (!conn.allow_autapses) {
      forbidden = [&](std::uint32_t s, std::uint32_t t) { return sources[s] == targets[t]; };
    }
    const auto pairs = expand_rule(conn, sources.size(), targets.size(), rng, rng, forbidden);
    pending.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      pending.push_back({sources[pairs[k].source], targets[pairs[k].target], k});
    }
  }
  append_records(pending, syn, port);
  return pending.size();
}

void RankState::check_remote_connect(const RemoteConnectCall& call) const {
  require_constructing("connecting");
  if (call.source_rank >= settings_.n_ranks || call.target_rank >= settings_.n_ranks) {
    throw InvalidArgument(fmt::format("ranks ({}, {}) outside [0, {})", call.source_rank,
                                      call.target_rank, settings_.n_ranks));
  }
  check_group(call.group, call.source_rank, call.target_rank);
  call.conn.validate(call.sources.size(), call.targets.size());
  call.syn.validate();
  if (has_explicit_arrays(call.syn)) {
    if (!call.conn.allow_autapses && call.source_rank == call.target_rank) {
      throw InvalidArgument("explicit synapse arrays cannot be combined with autapse filtering");
    }
    check_explicit_arrays(call.syn, expected_connection_count(call.conn, call.sources.size(),
                                                              call.targets.size()));
  }
  if (settings_.rank == call.source_rank) check_neurons(call.sources, "source");
  if (settings_.rank == call.target_rank) check_neurons(call.targets, "target");
}

RemoteSourceMap& RankState::map_for(GroupId group, Rank source) {
  auto [it, inserted] = maps_.try_emplace(MapKey{group, source}, settings_.block_size,
                                          &arenas_.of(placement_.remote_source_maps),
                                          &arenas_.of(placement_.local_image_maps));
  return it->second;
}

std::size_t RankState::remote_connect(const RemoteConnectCall& call) {
  check_remote_connect(call);
  const Rank me = settings_.rank;
  if (call.source_rank == call.target_rank) {
    return me == call.target_rank
               ? connect_local(call.sources, call.targets, call.conn, call.syn, call.port)
               : 0;
  }

  std::uint32_t pair_call = 0;
  if (me == call.source_rank || me == call.target_rank) {
    pair_call = pair_calls_[{call.source_rank, call.target_rank}]++;
  }
  if (call.group >= 0 && in_group(call.group, me)) {
    std::vector<NodeIndex> fresh(call.sources.begin(), call.sources.end());
    std::sort(fresh.begin(), fresh.end());
    auto& set = host_sets_[MapKey{call.group, call.source_rank}];
    std::vector<NodeIndex> merged;
    merged.reserve(set.size() + fresh.size());
    std::set_union(set.begin(), set.end(), fresh.begin(), fresh.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    set = std::move(merged);
  }

  std::size_t created = 0;
  if (me == call.target_rank) created = target_share(call, pair_call);
  if (me == call.source_rank && call.group == kPointToPoint) source_share(call, pair_call);
  return created;
}

std::size_t RankState::target_share(const RemoteConnectCall& call, std::uint32_t pair_call) {
  const Rank me = settings_.rank;
  std::vector<Pending> pending;
  std::vector<std::uint8_t> flags;
  AssignedBatch batch;
  std::span<const NodeIndex> source_values = call.sources;

  if (call.conn.rule == ConnRule::AssignedNodes) {
    batch = normalize_assigned(call.sources, call.targets);
    source_values = batch.sources;
    pending.reserve(batch.pairs.size());
    for (const PositionPair& p : batch.pairs) {
      pending.push_back({p.source, call.targets[p.target], p.target});
    }
  } else {
    RngStream pair_rng(settings_.seed, StreamId::pair(call.source_rank, me), pair_call);
    RngStream local_rng(settings_.seed, StreamId::tagged(StreamPurpose::LocalConnect, me),
                        local_calls_++);
    const auto pairs =
        expand_rule(call.conn, call.sources.size(), call.targets.size(), pair_rng, local_rng);
    pending.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      pending.push_back({pairs[k].source, call.targets[pairs[k].target], k});
    }
    if (use_source_flagging(call.conn, call.sources.size(), call.targets.size(),
                            settings_.flag_threshold)) {
      std::vector<std::uint32_t> positions;
      positions.reserve(pending.size());
      for (const Pending& p : pending) positions.push_back(p.source);
      flags = flag_used_sources(positions, call.sources.size());
    }
  }

  MemoryArena& scratch = arenas_.device;
  ScopedCharge temp_l(scratch, source_values.size() * ByteCosts::temp_index);
  ScopedCharge temp_b(scratch, flags.size() * ByteCosts::temp_flag);
  const UsedSubarray used = extract_used_subarray(source_values, flags);
  ScopedCharge temp_used(scratch, used.positions.size() * 2 * ByteCosts::temp_index);

  std::vector<std::int64_t> image_of(source_values.size(), kNoImage);
  NodeIndex m = node_count();
  const std::size_t created =
      lookup_or_create_images(map_for(call.group, call.source_rank), used, m, image_of);
  for (std::size_t i = 0; i < created; ++i) {
    kinds_.push_back(NodeKind::Image);
    gids_.push_back(kNoGid);
    neuron_slot_.push_back(kNoSlot);
  }

  const std::size_t begin = store_.size();
  append_records(pending, call.syn, call.port);
  remap_connection_sources(store_, begin, image_of);
  return pending.size();
}

void RankState::source_share(const RemoteConnectCall& call, std::uint32_t pair_call) {
  std::vector<std::uint8_t> flags;
  std::vector<NodeIndex> unique_sources;
  std::span<const NodeIndex> source_values = call.sources;
  if (call.conn.rule == ConnRule::AssignedNodes) {
    unique_sources.assign(call.sources.begin(), call.sources.end());
    std::sort(unique_sources.begin(), unique_sources.end());
    unique_sources.erase(std::unique(unique_sources.begin(), unique_sources.end()),
                         unique_sources.end());
    source_values = unique_sources;
  } else if (use_source_flagging(call.conn, call.sources.size(), call.targets.size(),
                                 settings_.flag_threshold)) {
    // Same stream, same draws as the target rank: the used sources agree
    // without any message between the two ranks.
    RngStream pair_rng(settings_.seed, StreamId::pair(settings_.rank, call.target_rank), pair_call);
    const auto positions =
        draw_source_positions(call.conn, call.sources.size(), call.targets.size(), pair_rng);
    flags = flag_used_sources(positions, call.sources.size());
  }

  MemoryArena& scratch = arenas_.device;
  ScopedCharge temp_b(scratch, flags.size() * ByteCosts::temp_flag);
  const UsedSubarray used = extract_used_subarray(source_values, flags);
  ScopedCharge temp_used(scratch, used.positions.size() * 2 * ByteCosts::temp_index);
  auto [it, inserted] =
      sequences_.try_emplace(call.target_rank, settings_.block_size, &arenas_.device);
  it->second.update(used.values);
}

void RankState::check_distributed_fixed_indegree(const DistributedIndegreeCall& call) const {
  require_constructing("connecting");
  if (call.indegree == 0) throw InvalidArgument("fixed in-degree needs a positive in-degree");
  if (call.sources.empty() || call.targets.empty()) {
    throw InvalidArgument("fixed in-degree needs non-empty source and target populations");
  }
  if (has_explicit_arrays(call.syn)) {
    throw InvalidArgument("the distributed fixed in-degree rule takes no explicit synapse arrays");
  }
  call.syn.validate();
  for (const auto* pop : {&call.sources, &call.targets}) {
    for (const PopulationSlice& slice : *pop) {
      if (slice.rank >= settings_.n_ranks) {
        throw InvalidArgument(fmt::format("population slice on unknown rank {}", slice.rank));
      }
      if (slice.rank == settings_.rank) {
        for (std::uint32_t i = 0; i < slice.count; ++i) {
          const NodeIndex n = slice.first + i;
          check_neurons(std::span<const NodeIndex>(&n, 1), "population");
        }
      }
    }
  }
  for (const PopulationSlice& t : call.targets) {
    for (const PopulationSlice& s : call.sources) {
      if (s.rank != t.rank) check_group(call.group, s.rank, t.rank);
    }
  }
}

std::size_t RankState::distributed_fixed_indegree(const DistributedIndegreeCall& call) {
  check_distributed_fixed_indegree(call);
  const Rank me = settings_.rank;
  const std::uint64_t call_index = distributed_calls_++;
  const bool group_member = call.group >= 0 && in_group(call.group, me);
  const bool source_rank =
      std::any_of(call.sources.begin(), call.sources.end(),
                  [me](const PopulationSlice& s) { return s.rank == me; });

  std::size_t stored = 0;
  for (std::size_t j = 0; j < call.targets.size(); ++j) {
    const PopulationSlice& slice = call.targets[j];
    if (slice.count == 0) continue;
    if (slice.rank != me && !source_rank && !group_member) continue;
    const auto triplets = draw_distributed_triplets(settings_.seed, call_index, j, slice,
                                                    call.sources, call.indegree);
    std::vector<NodeIndex> s;
    std::vector<NodeIndex> t;
    for (std::size_t begin = 0; begin < triplets.size();) {
      const Rank sigma = triplets[begin].source_rank;
      std::size_t end = begin;
      s.clear();
      t.clear();
      while (end < triplets.size() && triplets[end].source_rank == sigma) {
        s.push_back(triplets[end].source);
        t.push_back(triplets[end].target);
        ++end;
      }
      if (sigma == slice.rank) {
        if (me == sigma) stored += connect_local(s, t, ConnSpec::assigned_nodes(), call.syn, call.port);
      } else {
        RemoteConnectCall rc;
        rc.source_rank = sigma;
        rc.sources = s;
        rc.target_rank = slice.rank;
        rc.targets = t;
        rc.conn = ConnSpec::assigned_nodes();
        rc.syn = call.syn;
        rc.port = call.port;
        rc.group = call.group;
        stored += remote_connect(rc);
      }
      begin = end;
    }
  }
  return stored;
}

void RankState::set_membrane_potential(NodeIndex node, double v_m) {
  check_neurons(std::span<const NodeIndex>(&node, 1), "neuron");
  neurons_[neuron_slot_[node]].V_m = v_m;
}

void RankState::attach_poisson(NodeIndex node, double rate_hz, double weight) {
  check_neurons(std::span<const NodeIndex>(&node, 1), "neuron");
  if (!(rate_hz >= 0.0)) throw InvalidArgument("Poisson rate must be non-negative");
  drives_[neuron_slot_[node]] =
      PoissonSource{rate_hz, weight,
                    RngStream(settings_.seed, StreamId::tagged(StreamPurpose::Poisson, gids_[node]))};
}

std::uint32_t RankState::neuron_slot(NodeIndex node) const {
  const std::uint32_t slot = neuron_slot_.at(node);
  if (slot == kNoSlot) throw ConsistencyError(fmt::format("node {} is an image node", node));
  return slot;
}

const RemoteSourceMap* RankState::remote_map(GroupId group, Rank source) const {
  const auto it = maps_.find(MapKey{group, source});
  return it == maps_.end() ? nullptr : &it->second;
}

const SourceSequence* RankState::source_sequence(Rank target) const {
  const auto it = sequences_.find(target);
  return it == sequences_.end() ? nullptr : &it->second;
}

std::span<const NodeIndex> RankState::host_set(GroupId group, Rank source) const {
  const auto it = host_sets_.find(MapKey{group, source});
  if (it == host_sets_.end()) return {};
  return it->second;
}

const GroupHostArray* RankState::host_array(GroupId group, Rank source) const {
  const auto it = host_arrays_.find(MapKey{group, source});
  return it == host_arrays_.end() ? nullptr : &it->second;
}

const ImageIndexArray* RankState::image_index(GroupId group, Rank source) const {
  const auto it = image_indices_.find(MapKey{group, source});
  return it == image_indices_.end() ? nullptr : &it->second;
}

void RankState::prepare(double resolution_ms) {
  require_constructing("preparation");
  if (!(resolution_ms > 0.0)) throw InvalidArgument("resolution must be positive");
  const Rank me = settings_.rank;
  const NodeIndex m = node_count();
  const std::uint64_t n_neurons = neurons_.size();
  const std::uint64_t n_images = image_count();

  store_.sort_by_source(&arenas_.device);
  store_.build_index(m, placement_.store_counts);
  charge(MemoryKind::Device, (n_neurons + 1) * ByteCosts::first_index_entry);
  charge(placement_.first_index, n_images * ByteCosts::first_index_entry);
  if (placement_.store_counts) {
    charge(MemoryKind::Device, n_neurons * ByteCosts::count_entry);
    charge(placement_.count_array, n_images * ByteCosts::count_entry);
  }

  // Point-to-point routing: T/P from the S sequences.
  std::vector<std::pair<Rank, std::span<const NodeIndex>>> p2p_lists;
  for (const auto& [target, seq] : sequences_) {
    if (seq.size() == 0) continue;
    p2p_lists.emplace_back(target, seq.values());
    p2p_destinations_.push_back(target);
  }
  p2p_routes_ = P2pRoutingTable::build(m, p2p_lists);
  for (const auto& [key, map] : maps_) {
    if (key.first == kPointToPoint && !map.empty()) p2p_senders_.push_back(key.second);
  }

  // Collective routing: H and I for every group of this rank, G/Q from H.
  std::vector<std::pair<GroupId, std::span<const NodeIndex>>> group_lists;
  const RemoteSourceMap empty_map;
  for (GroupId a = 0; a < static_cast<GroupId>(groups_.size()); ++a) {
    if (!in_group(a, me)) continue;
    bool any = false;
    for (Rank sigma : groups_[static_cast<std::size_t>(a)]) {
      const auto hs = host_set(a, sigma);
      auto& host = host_arrays_[MapKey{a, sigma}];
      host.assign(hs.begin(), hs.end());
      any = any || !host.empty();
      charge(placement_.remote_source_maps, blocked(host.size()) * ByteCosts::map_entry);
      if (sigma != me) {
        const RemoteSourceMap* map = remote_map(a, sigma);
        image_indices_[MapKey{a, sigma}] = build_image_index(host, map ? *map : empty_map);
        charge(placement_.local_image_maps, blocked(host.size()) * ByteCosts::map_entry);
      }
    }
    if (any) active_groups_.push_back(a);
    const auto& own = host_arrays_[MapKey{a, me}];
    if (!own.empty()) group_lists.emplace_back(a, own);
  }
  group_routes_ = GroupRoutingTable::build(m, group_lists);

  const auto routing_bytes = [&](std::size_t entries) {
    return static_cast<std::uint64_t>(entries) * 2 * ByteCosts::routing_entry +
           (static_cast<std::uint64_t>(m) + 1) * ByteCosts::routing_offset;
  };
  if (!p2p_lists.empty()) charge(MemoryKind::Device, routing_bytes(p2p_routes_.entry_count()));
  if (!group_lists.empty()) charge(MemoryKind::Device, routing_bytes(group_routes_.entry_count()));

  const std::size_t channels = neurons_.size() * n_ports_;
  const std::size_t length = static_cast<std::size_t>(max_delay_) + 1;
  charge(MemoryKind::Device, channels * length * ByteCosts::ring_slot);
  buffer_ = SpikeRingBuffer(channels, length);

  propagators_.clear();
  propagators_.reserve(neurons_.size());
  for (const LifNeuron& n : neurons_) propagators_.push_back(LifPropagator::make(n.params, resolution_ms));
  prepared_ = true;
}

}  // namespace proxysim
