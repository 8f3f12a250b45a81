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

namespace proxysim {

using Rank = std::uint32_t;
/// Index of a real or image node inside one rank. Real and image nodes share
/// one dense index space [0, M).
using NodeIndex = std::uint32_t;
/// Globally unique neuron id, independent of how neurons are laid out on ranks.
using Gid = std::uint64_t;
using GroupId = std::int32_t;
using TimeStep = std::int64_t;
using ReceptorPort = std::uint16_t;

/// Group id reserved for point-to-point connections.
inline constexpr GroupId kPointToPoint = -1;

/// Image index sentinel used in collective image-index arrays.
inline constexpr std::int64_t kNoImage = -1;

}  // namespace proxysim
