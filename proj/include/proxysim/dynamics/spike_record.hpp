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
#include <iosfwd>
#include <map>
#include <vector>

#include "proxysim/core/ids.hpp"

namespace proxysim {

struct SpikeEvent {
  Gid gid = 0;
  TimeStep step = 0;

  friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
};

/// Per-neuron spike trains keyed by gid; each train is strictly increasing.
class SpikeRecord {
 public:
  /// Throws ConsistencyError if `step` does not exceed the neuron's last spike.
  void add(Gid gid, TimeStep step);
  void merge(const SpikeRecord& other);

  [[nodiscard]] const std::map<Gid, std::vector<TimeStep>>& trains() const noexcept {
    return trains_;
  }
  [[nodiscard]] std::size_t spike_count() const noexcept { return count_; }

  /// Events ordered by step, then gid.
  [[nodiscard]] std::vector<SpikeEvent> events() const;
  /// FNV-1a over the ordered (step, gid) sequence.
  [[nodiscard]] std::uint64_t hash() const;

  /// Columnar text: one `gid<TAB>time_ms` line per spike, ordered by time then gid.
  void write_tsv(std::ostream& out, double resolution_ms) const;
  static SpikeRecord read_tsv(std::istream& in, double resolution_ms);

 private:
  std::map<Gid, std::vector<TimeStep>> trains_;
  std::size_t count_ = 0;
};

}  // namespace proxysim
