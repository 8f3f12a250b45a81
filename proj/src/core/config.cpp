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
#include "proxysim/core/config.hpp"

#include <cmath>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {

std::string_view to_string(CommMode mode) noexcept {
  return mode == CommMode::PointToPoint ? "p2p" : "collective";
}

std::optional<CommMode> parse_comm_mode(std::string_view text) noexcept {
  if (text == "p2p" || text == "point-to-point") return CommMode::PointToPoint;
  if (text == "collective") return CommMode::Collective;
  return std::nullopt;
}

void SimConfig::validate() const {
  if (!(resolution_ms > 0.0) || !std::isfinite(resolution_ms)) {
    throw InvalidArgument(fmt::format("resolution_ms must be positive, got {}", resolution_ms));
  }
  if (n_ranks == 0) throw InvalidArgument("n_ranks must be positive");
  if (opt_level < 0 || opt_level > 3) {
    throw InvalidArgument(fmt::format("opt_level must be in 0..3, got {}", opt_level));
  }
  if (block_size == 0) throw InvalidArgument("block_size must be positive");
  if (!(flag_threshold > 0.0)) {
    throw InvalidArgument(fmt::format("flag_threshold must be positive, got {}", flag_threshold));
  }
}

}  // namespace proxysim
