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
#include "proxysim/core/ring_buffer.hpp"

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {

SpikeRingBuffer::SpikeRingBuffer(std::size_t channels, std::size_t length)
    : channels_(channels), length_(length), slots_(channels * length, 0.0) {
  if (length < 2) {
    throw InvalidArgument("ring buffer length must be at least 2");
  }
}

void SpikeRingBuffer::add(std::size_t channel, TimeStep now, TimeStep delay, double amount) {
  if (delay < 1 || delay >= static_cast<TimeStep>(length_)) {
    throw OutOfRangeError(
        fmt::format("delay {} outside [1, {}) for ring buffer", delay, length_));
  }
  slots_[slot(channel, now + delay)] += amount;
}

double SpikeRingBuffer::consume(std::size_t channel, TimeStep now) noexcept {
  double& cell = slots_[slot(channel, now)];
  const double value = cell;
  cell = 0.0;
  return value;
}

double SpikeRingBuffer::peek(std::size_t channel, TimeStep step) const noexcept {
  return slots_[slot(channel, step)];
}

void SpikeRingBuffer::resize_channels(std::size_t channels) {
  if (channels < channels_) {
    throw InvalidArgument("ring buffer channels can only grow");
  }
  channels_ = channels;
  slots_.resize(channels_ * length_, 0.0);
}

}  // namespace proxysim
