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

#include <array>
#include <cmath>
#include <string>

#include "fourws/errors.hpp"
#include "fourws/numeric.hpp"

namespace fourws {

/// Front steering angles beyond this are rejected outright instead of being
/// evaluated near the cos(delta_f) singularity at pi/2; keeps the closed-loop
/// ODE Lipschitz on the admissible set.
inline constexpr double kSteerGuard = 1.4;  // [rad], ~80 deg

/// |cos(delta_f)| below this counts as singular.
inline constexpr double kCosSingularTol = 1e-6;

/// Geometric constants of the single-track 4WS vehicle.
struct VehicleParams {
  double wheelbase{2.7};   // front to rear axle center [m]
  double cg_offset{1.35};  // rear axle center to center of gravity [m]
};

inline void validate(const VehicleParams& p) {
  if (!(p.wheelbase > 0.0)) throw Error("vehicle: wheelbase must be > 0");
  if (!(p.cg_offset >= 0.0 && p.cg_offset <= p.wheelbase))
    throw Error("vehicle: cg_offset must be in [0, wheelbase]");
}

/// Pose of the rear axle center point in the Earth-fixed frame. The yaw angle
/// accumulates (no wrapping) so multi-turn maneuvers trace continuously;
/// wrapping happens only when converting to the path frame.
struct GlobalState {
  double x{};    // [m]
  double y{};    // [m]
  double psi{};  // yaw [rad], unwrapped
};

/// Front and rear wheel steering angles.
struct SteeringInput {
  double front{};  // [rad]
  double rear{};   // [rad]
};

/// Time derivative of GlobalState.
struct GlobalDerivative {
  double dx{};    // [m/s]
  double dy{};    // [m/s]
  double dpsi{};  // [rad/s]
};

/// Kinematic single-track model with steerable front and rear wheels:
///   dx   = V cos(psi + delta_r)
///   dy   = V sin(psi + delta_r)
///   dpsi = V sin(delta_f - delta_r) / (f cos delta_f)
inline GlobalDerivative global_derivatives(const GlobalState& state, const SteeringInput& input,
                                           const VehicleParams& params, double speed) {
  if (!(speed > 0.0)) throw Error("global_derivatives: speed must be > 0");
  if (std::abs(input.front) > kSteerGuard)
    throw SteerGuardError("front steering angle " + std::to_string(input.front) +
                          " rad exceeds guard " + std::to_string(kSteerGuard));
  const double cf = std::cos(input.front);
  if (std::abs(cf) < kCosSingularTol)
    throw SingularityError("cos(delta_f) = " + std::to_string(cf) + " is singular");
  return {speed * std::cos(state.psi + input.rear), speed * std::sin(state.psi + input.rear),
          speed * std::sin(input.front - input.rear) / (params.wheelbase * cf)};
}

/// Residuals of the three kinematic constraints (front wheel lateral, rear
/// wheel lateral, rear speed). Zero for any derivative produced by
/// global_derivatives.
inline std::array<double, 3> constraint_residuals(const GlobalState& state,
                                                  const GlobalDerivative& deriv,
                                                  const SteeringInput& input, double speed,
                                                  const VehicleParams& params) {
  const double f = params.wheelbase;
  const double sf = std::sin(state.psi + input.front);
  const double cfr = std::cos(state.psi + input.front);
  const double sr = std::sin(state.psi + input.rear);
  const double cr = std::cos(state.psi + input.rear);
  const double r1 = (deriv.dx - f * deriv.dpsi * std::sin(state.psi)) * sf -
                    (deriv.dy + f * deriv.dpsi * std::cos(state.psi)) * cfr;
  const double r2 = deriv.dx * sr - deriv.dy * cr;
  const double r3 = deriv.dx * cr + deriv.dy * sr - speed;
  return {r1, r2, r3};
}

/// Lateral acceleration at the center of gravity:
///   a_lat = V (psi_dot + delta_r_dot) cos(delta_r) + d psi_ddot
inline double lateral_acceleration(double psi_dot, double psi_ddot, double delta_r,
                                   double delta_r_dot, double speed,
                                   const VehicleParams& params) {
  return speed * (psi_dot + delta_r_dot) * std::cos(delta_r) + params.cg_offset * psi_ddot;
}

}  // namespace fourws
