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
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace proxysim {

enum class CommMode { PointToPoint, Collective };

std::string_view to_string(CommMode mode) noexcept;
std::optional<CommMode> parse_comm_mode(std::string_view text) noexcept;

inline constexpr int kDefaultOptLevel = 2;

struct SimConfig {
  double resolution_ms = 0.1;
  std::uint32_t n_ranks = 1;
  CommMode comm_mode = CommMode::PointToPoint;
  int opt_level = kDefaultOptLevel;
  std::uint32_t block_size = 1024;
  std::uint64_t seed = 12345;
  /// Source-flagging threshold on the expected-connections / sources ratio.
  double flag_threshold = 1.0;
  /// Per-rank device arena cap; exceeding it aborts construction.
  std::uint64_t device_cap_bytes = std::numeric_limits<std::uint64_t>::max();

  /// Throws InvalidArgument naming the first offending field.
  void validate() const;
};

}  // namespace proxysim
