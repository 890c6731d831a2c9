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
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fourws/controller.hpp"
#include "fourws/errors.hpp"
#include "fourws/numeric.hpp"
#include "fourws/path.hpp"
#include "fourws/vehicle_model.hpp"

namespace fourws {

enum class Frame {
  global,  // integrate (x, y, psi), project into the path frame per stage
  path,    // integrate (s, e, theta) directly
};

/// A complete closed-loop experiment. `fixed_steer`, when set, replaces the
/// path-tracking command with a constant steering input (used for open-loop
/// maneuvers such as minimum-radius circles).
struct Scenario {
  VehicleParams params{};
  ReferencePath path{ReferencePath::straight({0.0, 0.0}, 0.0)};
  double speed{5.0};                        // [m/s]
  ControllerConfig controller{};
  std::optional<SteeringInput> fixed_steer{};
  GlobalState initial{};
  double dt{1e-3};                          // [s]
  double duration{30.0};                    // [s]
  Frame frame{Frame::global};
};

inline void validate(const Scenario& sc) {
  validate(sc.params);
  if (!(sc.speed > 0.0)) throw Error("scenario: speed must be > 0");
  if (!(sc.dt > 0.0)) throw Error("scenario: dt must be > 0");
  if (!(sc.duration >= sc.dt)) throw Error("scenario: duration must be >= dt");
}

/// One recorded integration step. The derived fields (psi_dot, psi_ddot,
/// delta_r_dot, lat_accel) are filled by a finite-difference post-pass over
/// the stored trace, not during integration.
struct TraceSample {
  double t{};
  GlobalState global{};
  PathFrameState pf{};
  double curvature{};
  SteeringInput input{};
  double psi_dot{};
  double psi_ddot{};
  double delta_r_dot{};
  double lat_accel{};
};

struct Trace {
  std::vector<TraceSample> samples;
};

/// Classical fourth-order Runge-Kutta step; the derivative callback runs at
/// every stage, so a state-feedback controller embedded in it is re-evaluated
/// from each stage state.
template <std::size_t N, class DerivFn>
std::array<double, N> rk4_step(const DerivFn& deriv, const std::array<double, N>& y, double dt) {
  std::array<double, N> k1 = deriv(y);
  std::array<double, N> tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  std::array<double, N> k2 = deriv(tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  std::array<double, N> k3 = deriv(tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + dt * k3[i];
  std::array<double, N> k4 = deriv(tmp);
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

namespace detail {

/// Fill psi_dot / psi_ddot / delta_r_dot / lat_accel from the stored columns.
/// psi is unwrapped first so traces reconstructed from wrapped headings stay
/// differentiable across 2*pi jumps.
inline void fill_derived(Trace& trace, double dt, double speed, const VehicleParams& params) {
  const std::size_t n = trace.samples.size();
  std::vector<double> psi(n), dr(n);
  for (std::size_t i = 0; i < n; ++i) {
    psi[i] = trace.samples[i].global.psi;
    dr[i] = trace.samples[i].input.rear;
  }
  unwrap_angles(psi);
  const std::vector<double> psi_dot = derivative(psi, dt);
  const std::vector<double> psi_ddot = second_derivative(psi, dt);
  const std::vector<double> dr_dot = derivative(dr, dt);
  for (std::size_t i = 0; i < n; ++i) {
    TraceSample& s = trace.samples[i];
    s.psi_dot = psi_dot[i];
    s.psi_ddot = psi_ddot[i];
    s.delta_r_dot = dr_dot[i];
    s.lat_accel =
        lateral_acceleration(psi_dot[i], psi_ddot[i], s.input.rear, dr_dot[i], speed, params);
  }
}

inline SteeringInput steering_for(const Scenario& sc, const PathFrameState& pf, double curvature) {
  if (sc.fixed_steer) return *sc.fixed_steer;
  return command(pf, curvature, sc.controller, sc.params);
}

}  // namespace detail

/// Run the closed loop with fixed-step RK4 and record floor(duration/dt)+1
/// samples. Guard, singularity and projection errors abort the run with the
/// timestamp of the offending stage. Identical scenarios produce bit-identical
/// traces.
inline Trace run(const Scenario& sc) {
  validate(sc);
  const std::size_t steps = static_cast<std::size_t>(std::floor(sc.duration / sc.dt));
  Trace trace;
  trace.samples.reserve(steps + 1);

  if (sc.frame == Frame::global) {
    auto deriv = [&sc](const std::array<double, 3>& y) {
      const GlobalState g{y[0], y[1], y[2]};
      const PathFrameConversion conv = to_path_frame(g, sc.path);
      const SteeringInput u = detail::steering_for(sc, conv.state, conv.curvature);
      const GlobalDerivative d = global_derivatives(g, u, sc.params, sc.speed);
      return std::array<double, 3>{d.dx, d.dy, d.dpsi};
    };
    std::array<double, 3> y{sc.initial.x, sc.initial.y, sc.initial.psi};
    // continuation of the arclength column across full laps of a circular path
    const std::optional<double> period = sc.path.arclength_period();
    double prev_s = 0.0;
    bool have_prev_s = false;
    for (std::size_t i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) * sc.dt;
      try {
        const GlobalState g{y[0], y[1], y[2]};
        PathFrameConversion conv = to_path_frame(g, sc.path);
        const SteeringInput u = detail::steering_for(sc, conv.state, conv.curvature);
        if (period && have_prev_s) {
          double s = conv.state.s;
          while (s - prev_s > *period / 2.0) s -= *period;
          while (prev_s - s > *period / 2.0) s += *period;
          conv.state.s = s;
        }
        prev_s = conv.state.s;
        have_prev_s = true;
        trace.samples.push_back({t, g, conv.state, conv.curvature, u});
        if (i < steps) y = rk4_step(deriv, y, sc.dt);
      } catch (const Error& e) {
        throw SimulationAbort(t, e.what());
      }
    }
  } else {
    const PathFrameConversion init = to_path_frame(sc.initial, sc.path);
    auto deriv = [&sc](const std::array<double, 3>& y) {
      const PathFrameState pf{y[0], y[1], y[2]};
      const double curvature = sc.path.pose_at(pf.s).curvature;
      const SteeringInput u = detail::steering_for(sc, pf, curvature);
      const PathFrameDerivative d = path_frame_derivatives(pf, curvature, u, sc.params, sc.speed);
      return std::array<double, 3>{d.ds, d.de, d.dtheta};
    };
    std::array<double, 3> y{init.state.s, init.state.lateral_error, init.state.yaw_error};
    for (std::size_t i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) * sc.dt;
      try {
        const PathFrameState pf{y[0], y[1], y[2]};
        const PathPoint ref = sc.path.pose_at(pf.s);
        const SteeringInput u = detail::steering_for(sc, pf, ref.curvature);
        const GlobalState g{ref.x - pf.lateral_error * std::sin(ref.heading),
                            ref.y + pf.lateral_error * std::cos(ref.heading),
                            ref.heading + pf.yaw_error};
        trace.samples.push_back({t, g, pf, ref.curvature, u});
        if (i < steps) y = rk4_step(deriv, y, sc.dt);
      } catch (const Error& e) {
        throw SimulationAbort(t, e.what());
      }
    }
  }
  detail::fill_derived(trace, sc.dt, sc.speed, sc.params);
  return trace;
}

/// Scalar summaries of a trace. Metrics that are undefined for the given
/// maneuver (no settling, no steady circle) stay empty instead of reading 0.
struct Metrics {
  double max_abs_lat_accel{};
  double max_abs_lat_error{};
  double steady_state_error{};              // mean |e| over the final 10%
  std::optional<double> settle_time{};      // first t after which |e| < band forever
  std::optional<double> turning_radius{};   // V/|psi_dot|, steady circles only
};

inline Metrics compute_metrics(const Trace& trace, double speed, double band = 0.05) {
  if (trace.samples.empty()) throw Error("compute_metrics: empty trace");
  const std::size_t n = trace.samples.size();
  Metrics m;
  for (const TraceSample& s : trace.samples) {
    m.max_abs_lat_accel = std::max(m.max_abs_lat_accel, std::abs(s.lat_accel));
    m.max_abs_lat_error = std::max(m.max_abs_lat_error, std::abs(s.pf.lateral_error));
  }

  const std::size_t tail_begin = n - std::max<std::size_t>(n / 10, 1);
  double sum_abs_e = 0.0;
  for (std::size_t i = tail_begin; i < n; ++i)
    sum_abs_e += std::abs(trace.samples[i].pf.lateral_error);
  m.steady_state_error = sum_abs_e / static_cast<double>(n - tail_begin);

  // settle time: t just after the last sample violating the band
  std::size_t last_violation = n;  // n = none
  for (std::size_t i = n; i-- > 0;) {
    if (std::abs(trace.samples[i].pf.lateral_error) >= band) {
      last_violation = i;
      break;
    }
  }
  if (last_violation == n) {
    m.settle_time = 0.0;
  } else if (last_violation + 1 < n) {
    m.settle_time = trace.samples[last_violation + 1].t;
  }  // else: still outside the band at the end -> undefined

  // turning radius: detected only when |psi_dot| is steady over the tail
  double lo = std::abs(trace.samples[tail_begin].psi_dot);
  double hi = lo, sum = 0.0;
  for (std::size_t i = tail_begin; i < n; ++i) {
    const double w = std::abs(trace.samples[i].psi_dot);
    lo = std::min(lo, w);
    hi = std::max(hi, w);
    sum += w;
  }
  const double mean = sum / static_cast<double>(n - tail_begin);
  if (mean > 1e-6 && (hi - lo) < 0.01 * mean) {
    double acc = 0.0;
    for (std::size_t i = tail_begin; i < n; ++i)
      acc += speed / std::abs(trace.samples[i].psi_dot);
    m.turning_radius = acc / static_cast<double>(n - tail_begin);
  }
  return m;
}

}  // namespace fourws
