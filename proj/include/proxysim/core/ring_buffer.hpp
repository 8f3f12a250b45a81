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

#include <cstddef>
#include <vector>

#include "proxysim/core/ids.hpp"

namespace proxysim {

// Bank of circular input buffers, one per channel (neuron x port). Slot
// (now + delay) mod length of a channel accumulates everything that must reach
// it at step now + delay; reading the current slot consumes it.
class SpikeRingBuffer {
 public:
  SpikeRingBuffer() = default;
  /// `length` must be at least max_delay + 1.
  SpikeRingBuffer(std::size_t channels, std::size_t length);

  /// Throws OutOfRangeError unless 1 <= delay < length.
  void add(std::size_t channel, TimeStep now, TimeStep delay, double amount);
  /// Returns the accumulated value of the current slot and zeroes it.
  double consume(std::size_t channel, TimeStep now) noexcept;
  [[nodiscard]] double peek(std::size_t channel, TimeStep step) const noexcept;

  /// Grows the channel count; new channels start zeroed.
  void resize_channels(std::size_t channels);

  [[nodiscard]] std::size_t channels() const noexcept { return channels_; }
  [[nodiscard]] std::size_t length() const noexcept { return length_; }

 private:
  [[nodiscard]] std::size_t slot(std::size_t channel, TimeStep step) const noexcept {
    return channel * length_ + static_cast<std::size_t>(step % static_cast<TimeStep>(length_));
  }

  std::size_t channels_ = 0;
  std::size_t length_ = 0;
  std::vector<double> slots_;
};

}  // namespace proxysim
