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
#include "proxysim/dynamics/spike_record.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {
namespace {

int decimals_for(double resolution_ms) {
  for (int d = 0; d < 10; ++d) {
    const double scaled = resolution_ms * std::pow(10.0, d);
    if (std::fabs(scaled - std::round(scaled)) < 1e-9 * std::max(1.0, scaled)) {
      return std::max(d, 1);
    }
  }
  return 10;
}

}  // namespace

void SpikeRecord::add(Gid gid, TimeStep step) {
  auto& train = trains_[gid];
  if (!train.empty() && train.back() >= step) {
    throw ConsistencyError(
        fmt::format("spike of neuron {} at step {} does not follow step {}", gid, step, train.back()));
  }
  train.push_back(step);
  ++count_;
}

void SpikeRecord::merge(const SpikeRecord& other) {
  for (const auto& [gid, train] : other.trains_) {
    auto& mine = trains_[gid];
    std::vector<TimeStep> merged;
    merged.reserve(mine.size() + train.size());
    std::merge(mine.begin(), mine.end(), train.begin(), train.end(), std::back_inserter(merged));
    if (std::adjacent_find(merged.begin(), merged.end()) != merged.end()) {
      throw ConsistencyError(fmt::format("duplicate spike for neuron {} while merging", gid));
    }
    mine = std::move(merged);
    count_ += train.size();
  }
}

std::vector<SpikeEvent> SpikeRecord::events() const {
  std::vector<SpikeEvent> out;
  out.reserve(count_);
  for (const auto& [gid, train] : trains_) {
    for (TimeStep t : train) out.push_back({gid, t});
  }
  std::sort(out.begin(), out.end(), [](const SpikeEvent& a, const SpikeEvent& b) {
    return a.step != b.step ? a.step < b.step : a.gid < b.gid;
  });
  return out;
}

std::uint64_t SpikeRecord::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  };
  for (const SpikeEvent& e : events()) {
    feed(static_cast<std::uint64_t>(e.step));
    feed(e.gid);
  }
  return h;
}

void SpikeRecord::write_tsv(std::ostream& out, double resolution_ms) const {
  const int decimals = decimals_for(resolution_ms);
  for (const SpikeEvent& e : events()) {
    out << fmt::format("{}\t{:.{}f}\n", e.gid, static_cast<double>(e.step) * resolution_ms,
                       decimals);
  }
}

SpikeRecord SpikeRecord::read_tsv(std::istream& in, double resolution_ms) {
  SpikeRecord record;
  std::vector<SpikeEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    Gid gid = 0;
    double time_ms = 0.0;
    if (!(fields >> gid >> time_ms)) {
      throw ParseError(fmt::format("raster line {}: expected gid<TAB>time_ms", line_no));
    }
    events.push_back({gid, std::llround(time_ms / resolution_ms)});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const SpikeEvent& a, const SpikeEvent& b) { return a.step < b.step; });
  for (const SpikeEvent& e : events) record.add(e.gid, e.step);
  return record;
}

}  // namespace proxysim
