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
#include <vector>

#include "proxysim/core/ids.hpp"
#include "proxysim/core/memory_arena.hpp"

namespace proxysim {

struct ConnectionRecord {
  NodeIndex source = 0;
  NodeIndex target = 0;
  double weight = 0.0;
  std::uint32_t delay = 1;  // time steps, >= 1
  ReceptorPort port = 0;

  friend bool operator==(const ConnectionRecord&, const ConnectionRecord&) = default;
};

struct SourceRange {
  std::uint64_t first = 0;
  std::uint64_t count = 0;
};

/// Connection records of one rank, held in fixed-size blocks that are
/// allocated on demand. Each new block is charged in full to the arena.
///
/// After sort_by_source() the records of one source are contiguous and a
/// per-source index can be materialized; whether the count half of the index
/// is stored or derived from neighbouring first positions is up to the caller.
class ConnectionStore {
 public:
  explicit ConnectionStore(std::size_t block_size = 1024, MemoryArena* arena = nullptr);

  void append(const ConnectionRecord& record);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] std::size_t block_size() const noexcept { return block_size_; }
  [[nodiscard]] std::size_t block_count() const noexcept { return blocks_.size(); }

  [[nodiscard]] const ConnectionRecord& operator[](std::size_t i) const noexcept {
    return blocks_[i / block_size_][i % block_size_];
  }
  ConnectionRecord& operator[](std::size_t i) noexcept {
    return blocks_[i / block_size_][i % block_size_];
  }

  /// Stable sort with source as the first key, then insertion order. The
  /// transient copy is charged to `scratch` while the sort runs.
  void sort_by_source(MemoryArena* scratch = nullptr);
  /// Scans the records; sources may have been rewritten in place since the
  /// last sort, so no cached flag is trusted.
  [[nodiscard]] bool sorted_by_source() const noexcept;

  /// Builds first positions for nodes [0, node_count). When `store_counts` is
  /// false no count array exists and counts are derived on the fly.
  void build_index(NodeIndex node_count, bool store_counts);
  [[nodiscard]] bool has_index() const noexcept { return !first_.empty(); }
  [[nodiscard]] bool has_count_array() const noexcept { return counts_.has_value(); }
  [[nodiscard]] SourceRange range(NodeIndex source) const noexcept;
  [[nodiscard]] NodeIndex indexed_nodes() const noexcept {
    return first_.empty() ? 0 : static_cast<NodeIndex>(first_.size() - 1);
  }

 private:
  std::size_t block_size_;
  MemoryArena* arena_;
  std::size_t size_ = 0;
  std::vector<std::vector<ConnectionRecord>> blocks_;
  std::vector<std::uint64_t> first_;  // node_count + 1 entries
  std::optional<std::vector<std::uint32_t>> counts_;
};

}  // namespace proxysim
