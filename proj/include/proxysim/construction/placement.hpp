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

#include "proxysim/core/memory_arena.hpp"

namespace proxysim {

/// Where each class of remote-connectivity structure lives for one
/// optimization level. Structures indexed by image nodes follow the plan;
/// index entries of real neurons always live on the device.
struct PlacementPlan {
  int level = 2;
  MemoryKind remote_source_maps = MemoryKind::Device;  // R, H
  MemoryKind local_image_maps = MemoryKind::Device;    // L, I
  MemoryKind first_index = MemoryKind::Device;
  MemoryKind count_array = MemoryKind::Device;
  /// False when connection counts are derived from neighbouring first indices.
  bool store_counts = false;
};

/// Throws InvalidArgument for levels outside 0..3.
PlacementPlan apply_optimization_level(int level);

}  // namespace proxysim
