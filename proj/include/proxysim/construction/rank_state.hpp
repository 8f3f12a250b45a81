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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "proxysim/construction/conn_spec.hpp"
#include "proxysim/construction/placement.hpp"
#include "proxysim/construction/remote_maps.hpp"
#include "proxysim/core/config.hpp"
#include "proxysim/core/connection_store.hpp"
#include "proxysim/core/ids.hpp"
#include "proxysim/core/memory_arena.hpp"
#include "proxysim/core/ring_buffer.hpp"
#include "proxysim/dynamics/lif.hpp"
#include "proxysim/dynamics/poisson.hpp"

namespace proxysim {

struct RankSettings {
  Rank rank = 0;
  std::uint32_t n_ranks = 1;
  std::uint64_t seed = 0;
  std::size_t block_size = 1024;
  double flag_threshold = 1.0;
  int opt_level = kDefaultOptLevel;
  std::uint64_t device_cap_bytes = std::numeric_limits<std::uint64_t>::max();

  static RankSettings from_config(const SimConfig& config, Rank rank);
};

enum class NodeKind : std::uint8_t { Neuron, Image };

inline constexpr Gid kNoGid = std::numeric_limits<Gid>::max();

/// One script-level RemoteConnect. Every rank receives the same call and
/// executes only its own share of it.
struct RemoteConnectCall {
  Rank source_rank = 0;
  std::span<const NodeIndex> sources;  // indices in the source rank
  Rank target_rank = 0;
  std::span<const NodeIndex> targets;  // indices in the target rank
  ConnSpec conn;
  SynSpec syn;
  ReceptorPort port = 0;
  GroupId group = kPointToPoint;
};

/// Contiguous run of neurons on one rank.
struct PopulationSlice {
  Rank rank = 0;
  NodeIndex first = 0;
  std::uint32_t count = 0;
};

/// Fixed in-degree rule over populations spread across ranks.
struct DistributedIndegreeCall {
  std::vector<PopulationSlice> sources;
  std::vector<PopulationSlice> targets;
  std::uint64_t indegree = 0;
  SynSpec syn;
  ReceptorPort port = 0;
  GroupId group = kPointToPoint;
};

struct SourceTriplet {
  Rank source_rank = 0;
  NodeIndex source = 0;
  NodeIndex target = 0;  // index in the target slice's rank
  friend bool operator==(const SourceTriplet&, const SourceTriplet&) = default;
};

/// Triplets for one target slice: `indegree` uniform draws from the whole
/// source population per target, stably sorted by (source rank, source index).
/// Any rank can regenerate them from (seed, call index, slice index).
std::vector<SourceTriplet> draw_distributed_triplets(std::uint64_t seed, std::uint64_t call_index,
                                                     std::size_t slice_index,
                                                     const PopulationSlice& target_slice,
                                                     std::span<const PopulationSlice> sources,
                                                     std::uint64_t indegree);

/// Everything one rank owns: nodes, connections, remote maps, routing tables,
/// neuron state and arenas. Ranks never read each other's state.
class RankState {
 public:
  using MapKey = std::pair<GroupId, Rank>;  // (group or kPointToPoint, source rank)

  explicit RankState(const RankSettings& settings);
  RankState(const RankState&) = delete;
  RankState& operator=(const RankState&) = delete;

  /// Groups must be declared with consecutive ids starting at 0, identically on every rank.
  void declare_group(GroupId group, std::vector<Rank> members);

  /// Returns the first index of the new range [M, M + n).
  NodeIndex create_neurons(std::uint32_t n, const LifParams& params, Gid first_gid);
  std::size_t connect_local(std::span<const NodeIndex> sources, std::span<const NodeIndex> targets,
                            const ConnSpec& conn, const SynSpec& syn, ReceptorPort port = 0);

  /// Throws if this rank can tell the call is invalid; never mutates state.
  void check_remote_connect(const RemoteConnectCall& call) const;
  /// Executes this rank's share of a RemoteConnect. Returns the number of
  /// connections stored on this rank.
  std::size_t remote_connect(const RemoteConnectCall& call);
  void check_distributed_fixed_indegree(const DistributedIndegreeCall& call) const;
  std::size_t distributed_fixed_indegree(const DistributedIndegreeCall& call);

  void set_membrane_potential(NodeIndex node, double v_m);
  void attach_poisson(NodeIndex node, double rate_hz, double weight);

  /// Sorts connections, builds indices, routing tables, H/I arrays and ring
  /// buffers. Construction calls are rejected afterwards.
  void prepare(double resolution_ms);
  [[nodiscard]] bool prepared() const noexcept { return prepared_; }

  // --- structure observers -------------------------------------------------
  [[nodiscard]] Rank rank() const noexcept { return settings_.rank; }
  [[nodiscard]] const RankSettings& settings() const noexcept { return settings_; }
  [[nodiscard]] NodeIndex node_count() const noexcept { return static_cast<NodeIndex>(kinds_.size()); }
  [[nodiscard]] std::size_t neuron_count() const noexcept { return neurons_.size(); }
  [[nodiscard]] std::size_t image_count() const noexcept { return kinds_.size() - neurons_.size(); }
  [[nodiscard]] NodeKind kind(NodeIndex node) const { return kinds_.at(node); }
  [[nodiscard]] Gid gid(NodeIndex node) const { return gids_.at(node); }
  [[nodiscard]] const ConnectionStore& connections() const noexcept { return store_; }
  [[nodiscard]] const PlacementPlan& placement() const noexcept { return placement_; }
  [[nodiscard]] Arenas& arenas() noexcept { return arenas_; }
  [[nodiscard]] const Arenas& arenas() const noexcept { return arenas_; }

  [[nodiscard]] const RemoteSourceMap* remote_map(GroupId group, Rank source) const;
  [[nodiscard]] const std::map<MapKey, RemoteSourceMap>& remote_maps() const noexcept { return maps_; }
  [[nodiscard]] const SourceSequence* source_sequence(Rank target) const;
  [[nodiscard]] const std::map<Rank, SourceSequence>& source_sequences() const noexcept {
    return sequences_;
  }
  /// Sorted content of the accumulating set of sources of `source` used in `group`.
  [[nodiscard]] std::span<const NodeIndex> host_set(GroupId group, Rank source) const;
  [[nodiscard]] const std::vector<std::vector<Rank>>& groups() const noexcept { return groups_; }
  [[nodiscard]] bool in_group(GroupId group, Rank r) const;

  // --- prepared structures -------------------------------------------------
  [[nodiscard]] const P2pRoutingTable& p2p_routes() const noexcept { return p2p_routes_; }
  [[nodiscard]] const GroupRoutingTable& group_routes() const noexcept { return group_routes_; }
  [[nodiscard]] const GroupHostArray* host_array(GroupId group, Rank source) const;
  [[nodiscard]] const ImageIndexArray* image_index(GroupId group, Rank source) const;
  /// Ranks this rank sends point-to-point packets to, and expects them from.
  [[nodiscard]] const std::vector<Rank>& p2p_destinations() const noexcept { return p2p_destinations_; }
  [[nodiscard]] const std::vector<Rank>& p2p_senders() const noexcept { return p2p_senders_; }
  /// Groups of this rank whose host arrays are not all empty.
  [[nodiscard]] const std::vector<GroupId>& active_groups() const noexcept { return active_groups_; }

  // --- dynamic state (driven by the engine) --------------------------------
  [[nodiscard]] std::span<LifNeuron> neurons() noexcept { return neurons_; }
  [[nodiscard]] std::span<const LifNeuron> neurons() const noexcept { return neurons_; }
  [[nodiscard]] NodeIndex neuron_node(std::size_t slot) const { return neuron_nodes_.at(slot); }
  /// Position of a real neuron in neurons(); throws for image nodes.
  [[nodiscard]] std::uint32_t neuron_slot(NodeIndex node) const;
  [[nodiscard]] std::span<const LifPropagator> propagators() const noexcept { return propagators_; }
  [[nodiscard]] std::vector<std::optional<PoissonSource>>& drives() noexcept { return drives_; }
  [[nodiscard]] SpikeRingBuffer& input_buffer() noexcept { return buffer_; }
  [[nodiscard]] std::uint32_t port_count() const noexcept { return n_ports_; }
  [[nodiscard]] std::uint32_t max_delay() const noexcept { return max_delay_; }

 private:
  struct Pending {
    NodeIndex source;  // final index, or temporary position for remote batches
    NodeIndex target;
    std::size_t param;  // index into explicit weight/delay arrays
  };

  void require_constructing(const char* what) const;
  void check_neurons(std::span<const NodeIndex> nodes, const char* role) const;
  void check_group(GroupId group, Rank source, Rank target) const;
  RemoteSourceMap& map_for(GroupId group, Rank source);
  void append_records(std::span<const Pending> pending, const SynSpec& syn, ReceptorPort port);
  std::size_t target_share(const RemoteConnectCall& call, std::uint32_t pair_call);
  void source_share(const RemoteConnectCall& call, std::uint32_t pair_call);
  void charge(MemoryKind kind, std::uint64_t bytes);
  std::uint64_t blocked(std::size_t entries) const noexcept;

  RankSettings settings_;
  PlacementPlan placement_;
  Arenas arenas_;
  bool prepared_ = false;

  std::vector<NodeKind> kinds_;
  std::vector<Gid> gids_;
  std::vector<std::uint32_t> neuron_slot_;
  std::vector<LifNeuron> neurons_;
  std::vector<NodeIndex> neuron_nodes_;
  std::vector<LifPropagator> propagators_;
  std::vector<std::optional<PoissonSource>> drives_;

  ConnectionStore store_;
  std::uint32_t max_delay_ = 1;
  std::uint32_t n_ports_ = 1;

  std::vector<std::vector<Rank>> groups_;
  std::map<MapKey, RemoteSourceMap> maps_;
  std::map<Rank, SourceSequence> sequences_;
  std::map<MapKey, std::vector<NodeIndex>> host_sets_;
  std::map<std::pair<Rank, Rank>, std::uint32_t> pair_calls_;
  std::uint32_t local_calls_ = 0;
  std::uint32_t synapse_calls_ = 0;
  std::uint64_t distributed_calls_ = 0;

  P2pRoutingTable p2p_routes_;
  GroupRoutingTable group_routes_;
  std::map<MapKey, GroupHostArray> host_arrays_;
  std::map<MapKey, ImageIndexArray> image_indices_;
  std::vector<Rank> p2p_destinations_;
  std::vector<Rank> p2p_senders_;
  std::vector<GroupId> active_groups_;
  SpikeRingBuffer buffer_;
};

}  // namespace proxysim
