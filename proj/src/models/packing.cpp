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
#include "proxysim/models/packing.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <set>
#include <string_view>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::uint64_t parse_count(std::string_view field, std::size_t line_no, const char* column) {
  field = trim(field);
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || end != field.data() + field.size()) {
    throw ParseError(fmt::format("line {}: {} '{}' is not a non-negative integer", line_no, column,
                                 field));
  }
  return value;
}

}  // namespace

std::uint64_t PackingAssignment::max_bin_weight() const noexcept {
  return bin_weight.empty() ? 0 : *std::max_element(bin_weight.begin(), bin_weight.end());
}

nlohmann::ordered_json PackingAssignment::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < area_ids.size(); ++i) out[area_ids[i]] = bin_of[i];
  return out;
}

PackingAssignment pack_areas(const std::vector<AreaSpec>& areas, std::uint32_t n_bins) {
  if (n_bins == 0) throw InvalidArgument("number of bins must be positive");
  if (areas.empty()) throw InvalidArgument("no areas to pack");
  std::set<std::string> seen;
  for (const AreaSpec& a : areas) {
    if (!seen.insert(a.id).second) throw InvalidArgument(fmt::format("duplicate area id '{}'", a.id));
  }
  std::vector<std::size_t> order(areas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return areas[a].weight() > areas[b].weight();
  });

  PackingAssignment out;
  out.bin_of.assign(areas.size(), 0);
  out.bin_weight.assign(n_bins, 0);
  for (std::size_t i : order) {
    const auto lightest = static_cast<std::uint32_t>(
        std::min_element(out.bin_weight.begin(), out.bin_weight.end()) - out.bin_weight.begin());
    out.bin_of[i] = lightest;
    out.bin_weight[lightest] += areas[i].weight();
  }
  for (const AreaSpec& a : areas) out.area_ids.push_back(a.id);
  return out;
}

std::vector<AreaSpec> read_area_csv(std::istream& in) {
  std::vector<AreaSpec> areas;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = row.find(',', start);
      fields.push_back(row.substr(start, comma == std::string_view::npos ? row.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (areas.empty() && !fields.empty() && trim(fields[0]) == "area_id") continue;
    if (fields.size() != 3) {
      throw ParseError(fmt::format("line {}: expected 3 fields (area_id,neurons,in_connections), got {}",
                                   line_no, fields.size()));
    }
    AreaSpec area;
    area.id = std::string(trim(fields[0]));
    if (area.id.empty()) throw ParseError(fmt::format("line {}: empty area id", line_no));
    area.neurons = parse_count(fields[1], line_no, "neurons");
    area.in_connections = parse_count(fields[2], line_no, "in_connections");
    if (area.neurons == 0) {
      throw ParseError(fmt::format("line {}: area '{}' has no neurons", line_no, area.id));
    }
    areas.push_back(std::move(area));
  }
  if (areas.empty()) throw ParseError("area table has no rows");
  return areas;
}

}  // namespace proxysim
