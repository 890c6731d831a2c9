// Copyright 2026 The fourws Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <string>

#include "fourws/errors.hpp"
#include "fourws/path.hpp"
#include "fourws/vehicle_model.hpp"

namespace fourws {

/// Proportional feedback gains. The front wheel uses (k1, k2) on the lateral
/// and yaw errors; the rear wheel uses the same gains scaled by the coupling
/// parameter a (k3 = a*k1, k4 = a*k2, never stored separately). a = 0 is a
/// plain front-wheel-steering vehicle; a < 0 steers the rear opposite to the
/// front.
struct ControlGains {
  double k1{};  // front gain on lateral error [rad/m]
  double k2{};  // front gain on yaw error [rad/rad]
  double a{};   // rear/front coupling [-]

  double k3() const { return a * k1; }
  double k4() const { return a * k2; }
};

struct ControllerConfig {
  ControlGains gains{};
  bool feedforward_enabled{true};
};

/// Open-loop steering that holds the vehicle on a constant-curvature path:
/// delta_f = atan(kappa * f), delta_r = 0.
inline SteeringInput feedforward(double curvature, const VehicleParams& params) {
  return {std::atan(curvature * params.wheelbase), 0.0};
}

/// Proportional feedback on the path-frame errors:
/// delta_f = -k1 e - k2 theta, delta_r = a * delta_f.
inline SteeringInput feedback(double lateral_error, double yaw_error, const ControlGains& gains) {
  const double front = -gains.k1 * lateral_error - gains.k2 * yaw_error;
  return {front, gains.a * front};
}

/// Total steering command: feedforward (when enabled) plus feedback. A front
/// angle beyond the steering guard raises SteerGuardError; commands are never
/// silently clamped, so simulation results are either faithful or absent.
inline SteeringInput command(const PathFrameState& pf, double curvature,
                             const ControllerConfig& config, const VehicleParams& params) {
  SteeringInput u = feedback(pf.lateral_error, pf.yaw_error, config.gains);
  if (config.feedforward_enabled) {
    const SteeringInput ff = feedforward(curvature, params);
    u.front += ff.front;
    u.rear += ff.rear;
  }
  if (!(std::abs(u.front) <= kSteerGuard))
    throw SteerGuardError("steering command " + std::to_string(u.front) +
                          " rad exceeds guard " + std::to_string(kSteerGuard));
  return u;
}

}  // namespace fourws
