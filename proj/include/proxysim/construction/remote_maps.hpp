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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "proxysim/construction/conn_spec.hpp"
#include "proxysim/core/connection_store.hpp"
#include "proxysim/core/ids.hpp"
#include "proxysim/core/memory_arena.hpp"

namespace proxysim {

/// Sorted array of node indices whose storage is accounted in whole blocks.
class BlockedIndexArray {
 public:
  explicit BlockedIndexArray(std::size_t block_size = 1024, MemoryArena* arena = nullptr,
                             std::uint64_t entry_bytes = ByteCosts::map_entry)
      : block_size_(block_size), arena_(arena), entry_bytes_(entry_bytes) {}

  [[nodiscard]] std::span<const NodeIndex> values() const noexcept { return data_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] std::size_t charged_blocks() const noexcept { return charged_blocks_; }
  [[nodiscard]] NodeIndex operator[](std::size_t i) const noexcept { return data_[i]; }

  /// Replaces the contents; charges newly needed blocks.
  void assign(std::vector<NodeIndex> values);

 private:
  std::size_t block_size_;
  MemoryArena* arena_;
  std::uint64_t entry_bytes_;
  std::size_t charged_blocks_ = 0;
  std::vector<NodeIndex> data_;
};

/// Target-side map for one (group, source rank) pair: remote source index R_i
/// paired with local image index L_i, ascending in R.
class RemoteSourceMap {
 public:
  explicit RemoteSourceMap(std::size_t block_size = 1024, MemoryArena* r_arena = nullptr,
                           MemoryArena* l_arena = nullptr)
      : r_(block_size, r_arena), l_(block_size, l_arena) {}

  [[nodiscard]] std::size_t size() const noexcept { return r_.size(); }
  [[nodiscard]] bool empty() const noexcept { return r_.size() == 0; }
  [[nodiscard]] std::span<const NodeIndex> remote() const noexcept { return r_.values(); }
  [[nodiscard]] std::span<const NodeIndex> local() const noexcept { return l_.values(); }
  [[nodiscard]] std::size_t charged_blocks() const noexcept { return r_.charged_blocks(); }

  /// Position of `remote_index` in R, if mapped.
  [[nodiscard]] std::optional<std::size_t> find(NodeIndex remote_index) const noexcept;

  /// Inserts entries whose R values are ascending, unique and absent from the
  /// map, keeping the map sorted by R.
  void insert_sorted(std::span<const NodeIndex> new_remote, std::span<const NodeIndex> new_local);

 private:
  BlockedIndexArray r_;
  BlockedIndexArray l_;
};

/// Source-side mirror S of the target's R array for one target rank.
class SourceSequence {
 public:
  explicit SourceSequence(std::size_t block_size = 1024, MemoryArena* arena = nullptr)
      : s_(block_size, arena) {}

  [[nodiscard]] std::span<const NodeIndex> values() const noexcept { return s_.values(); }
  [[nodiscard]] std::size_t size() const noexcept { return s_.size(); }

  /// Appends the values of `used_sorted` not yet present, then restores order.
  void update(std::span<const NodeIndex> used_sorted);

 private:
  BlockedIndexArray s_;
};

// ---------------------------------------------------------------------------
// RemoteConnect sub-operations. They are free functions over plain arrays so
// the target and source sides can share them exactly.
// ---------------------------------------------------------------------------

/// Whether the rule/size combination warrants flagging the sources actually
/// used: only for rules that draw sources at random, and only when the
/// expected number of new connections per source is below `threshold`.
bool use_source_flagging(const ConnSpec& conn, std::size_t n_source, std::size_t n_target,
                         double threshold) noexcept;

/// b_i = 1 iff position i appears among `source_positions`.
std::vector<std::uint8_t> flag_used_sources(std::span<const std::uint32_t> source_positions,
                                            std::size_t n_source);

struct UsedSubarray {
  std::vector<std::uint32_t> positions;  // u~
  std::vector<NodeIndex> values;         // s~, ascending
};

/// Positions with b set, and the corresponding source values, ordered by value
/// (ties by position). An empty `flags` span means every position is used.
UsedSubarray extract_used_subarray(std::span<const NodeIndex> sources,
                                   std::span<const std::uint8_t> flags);

/// Looks up each used source in the map, creating image nodes M, M+1, ... for
/// the missing ones in ascending source order. Fills image_of[position] for
/// every used position. Returns the number of images created.
std::size_t lookup_or_create_images(RemoteSourceMap& map, const UsedSubarray& used,
                                    NodeIndex& node_count, std::span<std::int64_t> image_of);

/// Rewrites temporary position-valued sources of records [begin, end) with
/// image_of[position]. Throws ConsistencyError for unassigned positions.
void remap_connection_sources(ConnectionStore& store, std::size_t begin,
                              std::span<const std::int64_t> image_of);

/// Per-source CSR table of (destination, position) routes. Used both for the
/// point-to-point T/P pair and for the collective G/Q pair.
template <class Destination>
class RoutingTable {
 public:
  RoutingTable() = default;

  /// One (destination, sequence) pair per destination, ascending in destination.
  /// Source `seq[i]` gains the route (destination, i).
  static RoutingTable build(NodeIndex node_count,
                            std::span<const std::pair<Destination, std::span<const NodeIndex>>> lists);

  [[nodiscard]] std::span<const Destination> destinations(NodeIndex s) const noexcept {
    if (s + 1 >= offsets_.size()) return {};
    return {dest_.data() + offsets_[s], dest_.data() + offsets_[s + 1]};
  }
  [[nodiscard]] std::span<const std::uint32_t> positions(NodeIndex s) const noexcept {
    if (s + 1 >= offsets_.size()) return {};
    return {pos_.data() + offsets_[s], pos_.data() + offsets_[s + 1]};
  }
  [[nodiscard]] std::size_t entry_count() const noexcept { return dest_.size(); }
  [[nodiscard]] std::size_t node_count() const noexcept {
    return offsets_.empty() ? 0 : offsets_.size() - 1;
  }

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<Destination> dest_;
  std::vector<std::uint32_t> pos_;
};

/// T/P: target ranks where each source neuron has an image, and positions in
/// the corresponding (R, L) maps.
using P2pRoutingTable = RoutingTable<Rank>;
/// G/Q: groups where each source neuron has an image, and positions in H.
using GroupRoutingTable = RoutingTable<GroupId>;

/// H: sorted roster of sources of one rank used in RemoteConnect calls of a group.
using GroupHostArray = std::vector<NodeIndex>;
/// I: image index aligned with H, or kNoImage.
using ImageIndexArray = std::vector<std::int64_t>;

/// Builds I for one (group, source rank) pair from H and the corresponding map.
ImageIndexArray build_image_index(const GroupHostArray& host, const RemoteSourceMap& map);

}  // namespace proxysim
