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

#include <chrono>
#include <functional>

namespace proxysim {

/// Monotonic seconds. Injectable so tests can drive timers deterministically.
using Clock = std::function<double()>;

inline double steady_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

/// Wall-clock seconds spent per simulation phase.
struct PhaseTimers {
  double initialization = 0.0;
  double node_creation = 0.0;
  double local_connection = 0.0;
  double remote_connection = 0.0;
  double preparation = 0.0;
  double propagation = 0.0;

  [[nodiscard]] double construction_total() const noexcept {
    return initialization + node_creation + local_connection + remote_connection + preparation;
  }
};

/// Adds the elapsed time of its lifetime to one timer field.
class ScopedTimer {
 public:
  ScopedTimer(const Clock& clock, double& sink) : clock_(clock), sink_(sink), start_(clock_()) {}
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;
  ~ScopedTimer() { sink_ += clock_() - start_; }

 private:
  const Clock& clock_;
  double& sink_;
  double start_;
};

}  // namespace proxysim
