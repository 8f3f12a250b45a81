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

#include "proxysim/core/rng.hpp"

namespace proxysim {

// Poisson spike source driving a single target with a fixed weight.
struct PoissonSource {
  double rate_hz = 0.0;
  double weight = 0.0;
  RngStream stream;
};

/// Number of spikes emitted in one step of length dt_ms.
std::uint64_t poisson_emit(PoissonSource& source, double dt_ms) noexcept;

}  // namespace proxysim
