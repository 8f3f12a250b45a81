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
#include <span>
#include <vector>

#include "proxysim/core/ids.hpp"
#include "proxysim/transport/transport.hpp"

namespace proxysim {

// Wire framing for a socket-backed transport. All integers little-endian:
//   u32 length of everything after this field
//   u8  kind
//   u32 source rank
//   u32 group (0xFFFFFFFF for point-to-point)
//   (u32 position, u32 multiplicity) * n

enum class FrameKind : std::uint8_t { PointToPoint = 1, Gather = 2 };

struct Frame {
  FrameKind kind = FrameKind::PointToPoint;
  Rank src_rank = 0;
  GroupId group = kPointToPoint;
  Payload payload;
  friend bool operator==(const Frame&, const Frame&) = default;
};

inline constexpr std::size_t kFrameHeaderBytes = 4 + 1 + 4 + 4;

std::vector<std::uint8_t> encode_frame(const Frame& frame);
/// Decodes exactly one frame; throws ProtocolError on truncation, trailing
/// bytes, an unknown kind or a kind/group mismatch.
Frame decode_frame(std::span<const std::uint8_t> bytes);

}  // namespace proxysim
