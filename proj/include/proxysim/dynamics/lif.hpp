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

/// Current-based leaky integrate-and-fire with delta synapses. Potentials are
/// in mV, times in ms, capacitance in pF, bias current in pA. Synaptic input
/// is a direct jump of the membrane potential.
struct LifParams {
  double V_rest = 0.0;
  double V_reset = 10.0;
  double V_th = 20.0;
  double tau_m = 20.0;
  double C_m = 250.0;
  double t_ref = 2.0;
  double I_e = 0.0;

  /// Throws InvalidArgument on non-physical values (V_reset >= V_th, tau_m <= 0, ...).
  void validate() const;
};

struct LifNeuron {
  LifParams params;
  double V_m = 0.0;
  std::int64_t ref_countdown = 0;
};

/// Step constants for a parameter set at one resolution.
struct LifPropagator {
  double decay = 1.0;          // exp(-dt / tau_m)
  double bias = 0.0;           // I_e * tau_m / C_m * (1 - decay)
  std::int64_t ref_steps = 0;  // round(t_ref / dt)

  static LifPropagator make(const LifParams& params, double dt_ms);
};

/// Exact exponential update of one neuron. Returns true if it spiked; a
/// spiking neuron is reset and held at V_reset for ref_steps subsequent steps,
/// during which its input is discarded.
bool lif_update(LifNeuron& neuron, const LifPropagator& prop, double input) noexcept;
bool lif_update(LifNeuron& neuron, double input, double dt_ms);

}  // namespace proxysim
