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
#include "proxysim/core/connection_store.hpp"

#include <algorithm>

#include "proxysim/core/errors.hpp"

namespace proxysim {

ConnectionStore::ConnectionStore(std::size_t block_size, MemoryArena* arena)
    : block_size_(block_size), arena_(arena) {
  if (block_size_ == 0) {
    throw InvalidArgument("connection block size must be positive");
  }
}

void ConnectionStore::append(const ConnectionRecord& record) {
  if (record.delay < 1) {
    throw InvalidArgument("connection delay must be at least one time step");
  }
  if (size_ == blocks_.size() * block_size_) {
    if (arena_ != nullptr) arena_->alloc(block_size_ * ByteCosts::connection_record);
    blocks_.emplace_back();
    blocks_.back().reserve(block_size_);
  }
  blocks_.back().push_back(record);
  ++size_;
  first_.clear();
  counts_.reset();
}

bool ConnectionStore::sorted_by_source() const noexcept {
  for (std::size_t i = 1; i < size_; ++i) {
    if ((*this)[i - 1].source > (*this)[i].source) return false;
  }
  return true;
}

void ConnectionStore::sort_by_source(MemoryArena* scratch) {
  first_.clear();
  counts_.reset();
  if (sorted_by_source()) return;
  std::optional<ScopedCharge> charge;
  if (scratch != nullptr) charge.emplace(*scratch, size_ * ByteCosts::connection_record);

  std::vector<ConnectionRecord> all;
  all.reserve(size_);
  for (const auto& block : blocks_) all.insert(all.end(), block.begin(), block.end());
  std::stable_sort(all.begin(), all.end(),
                   [](const ConnectionRecord& a, const ConnectionRecord& b) {
                     return a.source < b.source;
                   });
  for (std::size_t i = 0; i < size_; ++i) (*this)[i] = all[i];
}

void ConnectionStore::build_index(NodeIndex node_count, bool store_counts) {
  if (!sorted_by_source()) {
    throw StateError("connection index requires records sorted by source");
  }
  first_.assign(static_cast<std::size_t>(node_count) + 1, 0);
  // Counting pass, then exclusive prefix sum.
  for (std::size_t i = 0; i < size_; ++i) {
    const NodeIndex s = (*this)[i].source;
    if (s >= node_count) {
      throw ConsistencyError("connection source outside the indexed node range");
    }
    ++first_[s + 1];
  }
  for (std::size_t s = 1; s < first_.size(); ++s) first_[s] += first_[s - 1];

  if (store_counts) {
    counts_.emplace(node_count);
    for (NodeIndex s = 0; s < node_count; ++s) {
      (*counts_)[s] = static_cast<std::uint32_t>(first_[s + 1] - first_[s]);
    }
  } else {
    counts_.reset();
  }
}

SourceRange ConnectionStore::range(NodeIndex source) const noexcept {
  if (source + 1 >= first_.size()) return {};
  const std::uint64_t first = first_[source];
  const std::uint64_t count = counts_ ? (*counts_)[source] : first_[source + 1] - first;
  return {first, count};
}

}  // namespace proxysim
