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
#include "proxysim/dynamics/poisson.hpp"

namespace proxysim {

std::uint64_t poisson_emit(PoissonSource& source, double dt_ms) noexcept {
  if (source.rate_hz <= 0.0) return 0;
  return source.stream.poisson(source.rate_hz * dt_ms / 1000.0);
}

}  // namespace proxysim
