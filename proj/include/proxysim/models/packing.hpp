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
#include <string>
#include <vector>

#include <json.hpp>

namespace proxysim {

struct AreaSpec {
  std::string id;
  std::uint64_t neurons = 0;
  std::uint64_t in_connections = 0;

  /// Packing weight: incoming connections plus neurons.
  [[nodiscard]] std::uint64_t weight() const noexcept { return in_connections + neurons; }
};

struct PackingAssignment {
  std::vector<std::string> area_ids;     // input order
  std::vector<std::uint32_t> bin_of;     // per area, input order
  std::vector<std::uint64_t> bin_weight; // per bin

  [[nodiscard]] std::uint64_t max_bin_weight() const noexcept;
  /// {area_id: bin} in input order.
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// Greedy longest-processing-time packing: areas by descending weight (input
/// order breaks ties) each go to the currently lightest bin (lowest index
/// breaks ties).
PackingAssignment pack_areas(const std::vector<AreaSpec>& areas, std::uint32_t n_bins);

/// Reads `area_id,neurons,in_connections` rows. A header row starting with
/// `area_id` is skipped. Errors carry the offending line number.
std::vector<AreaSpec> read_area_csv(std::istream& in);

}  // namespace proxysim
