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
#include <string>
#include <vector>

#include <json.hpp>

#include "proxysim/core/ids.hpp"
#include "proxysim/core/timing.hpp"
#include "proxysim/transport/transport.hpp"

namespace proxysim {

struct ArenaUsage {
  Rank rank = 0;
  std::uint64_t host_peak = 0;
  std::uint64_t device_peak = 0;
  std::uint64_t host_current = 0;
  std::uint64_t device_current = 0;
};

struct RunReport {
  PhaseTimers timers;
  /// Propagation wall time over model time; 0 when no model time was simulated.
  double rtf = 0.0;
  double warmup_ms = 0.0;
  double model_ms = 0.0;
  double resolution_ms = 0.1;
  std::uint64_t steps = 0;
  std::uint32_t n_ranks = 1;
  std::string comm_mode;
  int opt_level = 2;
  std::uint64_t seed = 0;
  std::uint64_t neurons = 0;
  std::uint64_t connections = 0;
  std::uint64_t image_nodes = 0;
  std::uint64_t spike_count = 0;
  std::uint64_t raster_hash = 0;
  std::uint64_t host_accesses = 0;
  std::vector<ArenaUsage> arenas;
  TransportStats transport;

  [[nodiscard]] std::uint64_t max_device_peak() const noexcept;
  [[nodiscard]] std::uint64_t max_host_peak() const noexcept;
};

/// Real-time factor; 0 for an empty model interval.
double real_time_factor(double propagation_wall_s, double model_ms) noexcept;

nlohmann::json to_json(const RunReport& report);
RunReport run_report_from_json(const nlohmann::json& j);

}  // namespace proxysim
