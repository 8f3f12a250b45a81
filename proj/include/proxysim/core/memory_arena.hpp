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
#include <string_view>

namespace proxysim {

enum class MemoryKind { Host, Device };

std::string_view to_string(MemoryKind kind) noexcept;

/// Declared per-entry byte costs. Arenas model memory, they do not measure it,
/// so every charge in the code base goes through this table.
struct ByteCosts {
  static constexpr std::uint64_t connection_record = 24;  // 2x u32 node, f64 weight, u32 delay, u16 port, pad
  static constexpr std::uint64_t map_entry = 4;           // one R, L, S, H or I element
  static constexpr std::uint64_t first_index_entry = 8;   // u64 position into the connection store
  static constexpr std::uint64_t count_entry = 4;         // u32 outgoing-connection count
  static constexpr std::uint64_t routing_entry = 4;       // one T, P, G or Q element
  static constexpr std::uint64_t routing_offset = 8;      // CSR offset per source neuron
  static constexpr std::uint64_t neuron_state = 32;       // V_m, refractory countdown, params ref
  static constexpr std::uint64_t ring_slot = 8;           // f64 accumulator
  static constexpr std::uint64_t temp_index = 4;          // temporary l, u~, s~ elements
  static constexpr std::uint64_t temp_flag = 1;           // temporary b element
};

/// Byte accounting with peak tracking for one memory kind of one rank.
class MemoryArena {
 public:
  explicit MemoryArena(MemoryKind kind,
                       std::uint64_t cap_bytes = std::numeric_limits<std::uint64_t>::max())
      : kind_(kind), cap_(cap_bytes) {}

  /// Throws AccountingError when the cap would be exceeded.
  void alloc(std::uint64_t bytes);
  /// Throws AccountingError when freeing more than is currently held.
  void free(std::uint64_t bytes);

  [[nodiscard]] MemoryKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::uint64_t current_bytes() const noexcept { return current_; }
  [[nodiscard]] std::uint64_t peak_bytes() const noexcept { return peak_; }
  [[nodiscard]] std::uint64_t cap_bytes() const noexcept { return cap_; }

 private:
  MemoryKind kind_;
  std::uint64_t cap_;
  std::uint64_t current_ = 0;
  std::uint64_t peak_ = 0;
};

/// Host/device pair owned by a rank.
struct Arenas {
  MemoryArena host{MemoryKind::Host};
  MemoryArena device{MemoryKind::Device};

  MemoryArena& of(MemoryKind kind) noexcept { return kind == MemoryKind::Host ? host : device; }
};

/// RAII charge for temporaries that live for the duration of one call.
class ScopedCharge {
 public:
  ScopedCharge(MemoryArena& arena, std::uint64_t bytes) : arena_(&arena), bytes_(bytes) {
    arena_->alloc(bytes_);
  }
  ScopedCharge(const ScopedCharge&) = delete;
  ScopedCharge& operator=(const ScopedCharge&) = delete;
  ~ScopedCharge() { arena_->free(bytes_); }

 private:
  MemoryArena* arena_;
  std::uint64_t bytes_;
};

}  // namespace proxysim
