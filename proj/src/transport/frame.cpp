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
#include "proxysim/transport/frame.hpp"

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {
namespace {

constexpr std::uint32_t kWireP2pGroup = 0xFFFFFFFFu;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
  const bool p2p = frame.kind == FrameKind::PointToPoint;
  if (p2p != (frame.group == kPointToPoint)) {
    throw InvalidArgument("point-to-point frames carry group -1 and gather frames a real group");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderBytes + frame.payload.size() * kEntryWireBytes);
  put_u32(out, static_cast<std::uint32_t>(1 + 4 + 4 + frame.payload.size() * kEntryWireBytes));
  out.push_back(static_cast<std::uint8_t>(frame.kind));
  put_u32(out, frame.src_rank);
  put_u32(out, p2p ? kWireP2pGroup : static_cast<std::uint32_t>(frame.group));
  for (const SpikeEntry& e : frame.payload) {
    put_u32(out, e.position);
    put_u32(out, e.multiplicity);
  }
  return out;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderBytes) {
    throw ProtocolError(fmt::format("frame of {} bytes is shorter than its header", bytes.size()));
  }
  const std::uint32_t length = get_u32(bytes, 0);
  if (static_cast<std::size_t>(length) + 4 != bytes.size()) {
    throw ProtocolError(
        fmt::format("frame length field {} does not match {} received bytes", length, bytes.size()));
  }
  if ((length - 9) % kEntryWireBytes != 0) {
    throw ProtocolError("frame payload is not a whole number of entries");
  }
  Frame frame;
  const std::uint8_t kind = bytes[4];
  if (kind != static_cast<std::uint8_t>(FrameKind::PointToPoint) &&
      kind != static_cast<std::uint8_t>(FrameKind::Gather)) {
    throw ProtocolError(fmt::format("unknown frame kind {}", kind));
  }
  frame.kind = static_cast<FrameKind>(kind);
  frame.src_rank = get_u32(bytes, 5);
  const std::uint32_t group = get_u32(bytes, 9);
  if (frame.kind == FrameKind::PointToPoint) {
    if (group != kWireP2pGroup) throw ProtocolError("point-to-point frame with a group id");
    frame.group = kPointToPoint;
  } else {
    if (group > 0x7FFFFFFFu) throw ProtocolError("gather frame without a valid group id");
    frame.group = static_cast<GroupId>(group);
  }
  const std::size_t n = (length - 9) / kEntryWireBytes;
  frame.payload.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t at = kFrameHeaderBytes + i * kEntryWireBytes;
    frame.payload.push_back({get_u32(bytes, at), get_u32(bytes, at + 4)});
  }
  return frame;
}

}  // namespace proxysim
