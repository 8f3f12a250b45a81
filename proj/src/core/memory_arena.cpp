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
#include "proxysim/core/memory_arena.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {

std::string_view to_string(MemoryKind kind) noexcept {
  return kind == MemoryKind::Host ? "host" : "device";
}

void MemoryArena::alloc(std::uint64_t bytes) {
  if (bytes > cap_ - current_) {
    throw AccountingError(fmt::format("{} arena cap of {} bytes exceeded ({} held, {} requested)",
                                      to_string(kind_), cap_, current_, bytes));
  }
  current_ += bytes;
  peak_ = std::max(peak_, current_);
}

void MemoryArena::free(std::uint64_t bytes) {
  if (bytes > current_) {
    throw AccountingError(fmt::format("{} arena underflow: freeing {} bytes with {} held",
                                      to_string(kind_), bytes, current_));
  }
  current_ -= bytes;
}

}  // namespace proxysim
