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
#include "proxysim/construction/remote_maps.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {

void BlockedIndexArray::assign(std::vector<NodeIndex> values) {
  const std::size_t needed = (values.size() + block_size_ - 1) / block_size_;
  if (needed > charged_blocks_ && arena_ != nullptr) {
    arena_->alloc((needed - charged_blocks_) * block_size_ * entry_bytes_);
  }
  charged_blocks_ = std::max(charged_blocks_, needed);
  data_ = std::move(values);
}

std::optional<std::size_t> RemoteSourceMap::find(NodeIndex remote_index) const noexcept {
  const auto r = remote();
  const auto it = std::lower_bound(r.begin(), r.end(), remote_index);
  if (it == r.end() || *it != remote_index) return std::nullopt;
  return static_cast<std::size_t>(it - r.begin());
}

void RemoteSourceMap::insert_sorted(std::span<const NodeIndex> new_remote,
                                    std::span<const NodeIndex> new_local) {
  if (new_remote.size() != new_local.size()) {
    throw ConsistencyError("remote and local map arrays must stay aligned");
  }
  if (new_remote.empty()) return;
  const auto r = remote();
  const auto l = local();
  std::vector<NodeIndex> merged_r;
  std::vector<NodeIndex> merged_l;
  merged_r.reserve(r.size() + new_remote.size());
  merged_l.reserve(r.size() + new_remote.size());

  if (r.empty() || r.back() < new_remote.front()) {
    // Appending past the current maximum needs no merge.
    merged_r.assign(r.begin(), r.end());
    merged_l.assign(l.begin(), l.end());
    merged_r.insert(merged_r.end(), new_remote.begin(), new_remote.end());
    merged_l.insert(merged_l.end(), new_local.begin(), new_local.end());
  } else {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < r.size() || j < new_remote.size()) {
      if (j == new_remote.size() || (i < r.size() && r[i] < new_remote[j])) {
        merged_r.push_back(r[i]);
        merged_l.push_back(l[i]);
        ++i;
      } else {
        if (i < r.size() && r[i] == new_remote[j]) {
          throw ConsistencyError(fmt::format("remote source {} already has an image", r[i]));
        }
        merged_r.push_back(new_remote[j]);
        merged_l.push_back(new_local[j]);
        ++j;
      }
    }
  }
  r_.assign(std::move(merged_r));
  l_.assign(std::move(merged_l));
}

void SourceSequence::update(std::span<const NodeIndex> used_sorted) {
  const auto current = s_.values();
  std::vector<NodeIndex> fresh;
  for (std::size_t j = 0; j < used_sorted.size(); ++j) {
    const NodeIndex v = used_sorted[j];
    if (j > 0 && used_sorted[j - 1] == v) continue;
    if (!std::binary_search(current.begin(), current.end(), v)) fresh.push_back(v);
  }
  if (fresh.empty()) return;
  std::vector<NodeIndex> merged;
  merged.reserve(current.size() + fresh.size());
  std::merge(current.begin(), current.end(), fresh.begin(), fresh.end(),
             std::back_inserter(merged));
  s_.assign(std::move(merged));
}

bool use_source_flagging(const ConnSpec& conn, std::size_t n_source, std::size_t n_target,
                         double threshold) noexcept {
  if (!conn.draws_sources() || n_source == 0) return false;
  const double expected = conn.rule == ConnRule::FixedIndegree
                              ? static_cast<double>(conn.degree) * static_cast<double>(n_target)
                              : static_cast<double>(conn.degree);
  return expected / static_cast<double>(n_source) < threshold;
}

std::vector<std::uint8_t> flag_used_sources(std::span<const std::uint32_t> source_positions,
                                            std::size_t n_source) {
  std::vector<std::uint8_t> flags(n_source, 0);
  for (std::uint32_t p : source_positions) {
    if (p >= n_source) {
      throw ConsistencyError(fmt::format("source position {} outside [0, {})", p, n_source));
    }
    flags[p] = 1;
  }
  return flags;
}

UsedSubarray extract_used_subarray(std::span<const NodeIndex> sources,
                                   std::span<const std::uint8_t> flags) {
  if (!flags.empty() && flags.size() != sources.size()) {
    throw InvalidArgument("flag array must match the source array");
  }
  UsedSubarray used;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (flags.empty() || flags[i] != 0) used.positions.push_back(static_cast<std::uint32_t>(i));
  }
  const bool already_sorted =
      std::is_sorted(used.positions.begin(), used.positions.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return sources[a] < sources[b]; });
  if (!already_sorted) {
    std::stable_sort(used.positions.begin(), used.positions.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return sources[a] < sources[b]; });
  }
  used.values.reserve(used.positions.size());
  for (std::uint32_t p : used.positions) used.values.push_back(sources[p]);
  return used;
}

std::size_t lookup_or_create_images(RemoteSourceMap& map, const UsedSubarray& used,
                                    NodeIndex& node_count, std::span<std::int64_t> image_of) {
  std::vector<NodeIndex> new_remote;
  std::vector<NodeIndex> new_local;
  for (std::size_t j = 0; j < used.values.size(); ++j) {
    const NodeIndex v = used.values[j];
    const std::uint32_t pos = used.positions[j];
    if (pos >= image_of.size()) {
      throw ConsistencyError("used position outside the image assignment array");
    }
    if (j > 0 && used.values[j - 1] == v) {
      image_of[pos] = image_of[used.positions[j - 1]];
      continue;
    }
    if (const auto hit = map.find(v)) {
      image_of[pos] = map.local()[*hit];
    } else {
      new_remote.push_back(v);
      new_local.push_back(node_count);
      image_of[pos] = node_count;
      ++node_count;
    }
  }
  map.insert_sorted(new_remote, new_local);
  return new_remote.size();
}

void remap_connection_sources(ConnectionStore& store, std::size_t begin,
                              std::span<const std::int64_t> image_of) {
  for (std::size_t i = begin; i < store.size(); ++i) {
    ConnectionRecord& rec = store[i];
    if (rec.source >= image_of.size() || image_of[rec.source] < 0) {
      throw ConsistencyError(
          fmt::format("temporary source position {} has no image assigned", rec.source));
    }
    rec.source = static_cast<NodeIndex>(image_of[rec.source]);
  }
}

template <class Destination>
RoutingTable<Destination> RoutingTable<Destination>::build(
    NodeIndex node_count,
    std::span<const std::pair<Destination, std::span<const NodeIndex>>> lists) {
  RoutingTable table;
  table.offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
  for (const auto& [dest, seq] : lists) {
    for (NodeIndex s : seq) {
      if (s >= node_count) {
        throw ConsistencyError(fmt::format("routed source {} outside [0, {})", s, node_count));
      }
      ++table.offsets_[s + 1];
    }
  }
  std::partial_sum(table.offsets_.begin(), table.offsets_.end(), table.offsets_.begin());
  table.dest_.resize(table.offsets_.back());
  table.pos_.resize(table.offsets_.back());
  std::vector<std::uint64_t> fill(table.offsets_.begin(), table.offsets_.end() - 1);
  for (const auto& [dest, seq] : lists) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const std::uint64_t at = fill[seq[i]]++;
      table.dest_[at] = dest;
      table.pos_[at] = static_cast<std::uint32_t>(i);
    }
  }
  return table;
}

template class RoutingTable<Rank>;
template class RoutingTable<GroupId>;

ImageIndexArray build_image_index(const GroupHostArray& host, const RemoteSourceMap& map) {
  ImageIndexArray index(host.size(), kNoImage);
  const auto r = map.remote();
  const auto l = map.local();
  // Both arrays are ascending, so one joint pass suffices.
  std::size_t i = 0;
  for (std::size_t j = 0; j < host.size(); ++j) {
    while (i < r.size() && r[i] < host[j]) ++i;
    if (i < r.size() && r[i] == host[j]) index[j] = l[i];
  }
  return index;
}

}  // namespace proxysim
