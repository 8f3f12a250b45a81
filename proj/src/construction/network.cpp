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
#include "proxysim/construction/network.hpp"

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {

std::vector<NodeIndex> NodeRange::indices() const {
  std::vector<NodeIndex> out(count);
  for (std::uint32_t i = 0; i < count; ++i) out[i] = first + i;
  return out;
}

Network::Network(const SimConfig& config, Clock clock) : config_(config), clock_(std::move(clock)) {
  if (!clock_) clock_ = steady_seconds;
  ScopedTimer timer(clock_, timers_.initialization);
  config_.validate();
  transport_ = std::make_unique<InProcessTransport>(config_.n_ranks);
  transport_->set_phase(Phase::Construction);
  ranks_.reserve(config_.n_ranks);
  for (Rank r = 0; r < config_.n_ranks; ++r) {
    ranks_.push_back(std::make_unique<RankState>(RankSettings::from_config(config_, r)));
  }
}

void Network::require_constructing() const {
  if (prepared_) throw StateError("the network is already prepared");
}

GroupId Network::create_group(std::vector<Rank> members) {
  require_constructing();
  ScopedTimer timer(clock_, timers_.initialization);
  const auto id = static_cast<GroupId>(groups_.size());
  transport_->define_group(id, members);
  for (auto& rank : ranks_) rank->declare_group(id, members);
  groups_.push_back(std::move(members));
  return id;
}

NodeRange Network::create_neurons(Rank r, std::uint32_t n, const LifParams& params) {
  require_constructing();
  ScopedTimer timer(clock_, timers_.node_creation);
  RankState& state = rank(r);
  if (state.image_count() > 0) {
    throw StateError(fmt::format(
        "rank {} already holds image nodes; create all neurons before remote connections", r));
  }
  NodeRange range{r, 0, n, next_gid_};
  range.first = state.create_neurons(n, params, next_gid_);
  next_gid_ += n;
  return range;
}

std::size_t Network::connect(Rank source_rank, std::span<const NodeIndex> sources, Rank target_rank,
                             std::span<const NodeIndex> targets, const ConnSpec& conn,
                             const SynSpec& syn, ReceptorPort port, GroupId group) {
  require_constructing();
  if (source_rank >= rank_count() || target_rank >= rank_count()) {
    throw InvalidArgument(fmt::format("ranks ({}, {}) outside [0, {})", source_rank, target_rank,
                                      rank_count()));
  }
  if (source_rank == target_rank) {
    ScopedTimer timer(clock_, timers_.local_connection);
    return rank(target_rank).connect_local(sources, targets, conn, syn, port);
  }
  ScopedTimer timer(clock_, timers_.remote_connection);
  RemoteConnectCall call{source_rank, sources, target_rank, targets, conn, syn, port, group};
  // Validate everywhere first so a rejected call leaves no rank half-updated.
  for (auto& r : ranks_) r->check_remote_connect(call);
  std::size_t created = 0;
  for (auto& r : ranks_) created += r->remote_connect(call);
  return created;
}

std::size_t Network::connect_fixed_indegree(std::span<const NodeRange> sources,
                                            std::span<const NodeRange> targets,
                                            std::uint64_t indegree, const SynSpec& syn,
                                            ReceptorPort port, GroupId group) {
  require_constructing();
  ScopedTimer timer(clock_, timers_.remote_connection);
  DistributedIndegreeCall call;
  for (const NodeRange& s : sources) call.sources.push_back(s.slice());
  for (const NodeRange& t : targets) call.targets.push_back(t.slice());
  call.indegree = indegree;
  call.syn = syn;
  call.port = port;
  call.group = group;
  for (auto& r : ranks_) r->check_distributed_fixed_indegree(call);
  std::size_t created = 0;
  for (auto& r : ranks_) created += r->distributed_fixed_indegree(call);
  return created;
}

void Network::attach_poisson(const NodeRange& range, double rate_hz, double weight) {
  ScopedTimer timer(clock_, timers_.node_creation);
  RankState& state = rank(range.rank);
  for (std::uint32_t i = 0; i < range.count; ++i) state.attach_poisson(range.first + i, rate_hz, weight);
}

void Network::randomize_membrane(const NodeRange& range, double mean, double sd) {
  ScopedTimer timer(clock_, timers_.node_creation);
  RankState& state = rank(range.rank);
  for (std::uint32_t i = 0; i < range.count; ++i) {
    RngStream rng(config_.seed, StreamId::tagged(StreamPurpose::NeuronInit, range.first_gid + i));
    state.set_membrane_potential(range.first + i, rng.normal(mean, sd));
  }
}

void Network::prepare() {
  require_constructing();
  ScopedTimer timer(clock_, timers_.preparation);
  transport_->set_phase(Phase::Preparation);
  for (auto& r : ranks_) r->prepare(config_.resolution_ms);
  prepared_ = true;
}

std::uint64_t Network::connection_total() const noexcept {
  std::uint64_t total = 0;
  for (const auto& r : ranks_) total += r->connections().size();
  return total;
}

}  // namespace proxysim
