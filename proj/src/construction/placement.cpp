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
#include "proxysim/construction/placement.hpp"

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {

PlacementPlan apply_optimization_level(int level) {
  constexpr auto H = MemoryKind::Host;
  constexpr auto D = MemoryKind::Device;
  switch (level) {
    case 0: return {0, H, H, H, H, true};
    case 1: return {1, D, H, H, H, true};
    case 2: return {2, D, D, D, D, false};
    case 3: return {3, D, D, D, D, true};
    default:
      throw InvalidArgument(fmt::format("optimization level must be in 0..3, got {}", level));
  }
}

}  // namespace proxysim
