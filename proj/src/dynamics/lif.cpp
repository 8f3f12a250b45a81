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
#include "proxysim/dynamics/lif.hpp"

#include <cmath>

#include <fmt/format.h>

#include "proxysim/core/errors.hpp"

namespace proxysim {

void LifParams::validate() const {
  if (!(V_reset < V_th)) {
    throw InvalidArgument(fmt::format("V_reset ({}) must be below V_th ({})", V_reset, V_th));
  }
  if (!(tau_m > 0.0)) throw InvalidArgument("tau_m must be positive");
  if (!(C_m > 0.0)) throw InvalidArgument("C_m must be positive");
  if (!(t_ref >= 0.0)) throw InvalidArgument("t_ref must be non-negative");
}

LifPropagator LifPropagator::make(const LifParams& params, double dt_ms) {
  params.validate();
  if (!(dt_ms > 0.0)) throw InvalidArgument("time step must be positive");
  LifPropagator prop;
  prop.decay = std::exp(-dt_ms / params.tau_m);
  prop.bias = params.I_e * params.tau_m / params.C_m * (1.0 - prop.decay);
  prop.ref_steps = std::llround(params.t_ref / dt_ms);
  return prop;
}

bool lif_update(LifNeuron& n, const LifPropagator& prop, double input) noexcept {
  if (n.ref_countdown > 0) {
    --n.ref_countdown;
    n.V_m = n.params.V_reset;
    return false;
  }
  n.V_m = n.params.V_rest + (n.V_m - n.params.V_rest) * prop.decay + prop.bias + input;
  if (n.V_m >= n.params.V_th) {
    n.V_m = n.params.V_reset;
    n.ref_countdown = prop.ref_steps;
    return true;
  }
  return false;
}

bool lif_update(LifNeuron& neuron, double input, double dt_ms) {
  return lif_update(neuron, LifPropagator::make(neuron.params, dt_ms), input);
}

}  // namespace proxysim
