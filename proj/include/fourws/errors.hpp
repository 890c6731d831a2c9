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

#include <stdexcept>
#include <string>

namespace fourws {

/// Base class of all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Model evaluated at (or past) a singular configuration, e.g. cos(delta_f)
/// near zero or a path-frame tube violation (1 - kappa*e <= 0).
struct SingularityError : Error {
  using Error::Error;
};

/// Steering command exceeded the admissible range. Simulations abort on this
/// instead of silently clamping.
struct SteerGuardError : Error {
  using Error::Error;
};

/// Closest-point projection is ambiguous (e.g. the arc center).
struct ProjectionError : Error {
  using Error::Error;
};

/// Arclength outside the domain of a finite path.
struct PathRangeError : Error {
  using Error::Error;
};

/// Pole placement requested on a branch where the closed loop cannot realize
/// a double root (a = 1 with zero curvature pins one pole at the origin).
struct PlacementError : Error {
  using Error::Error;
};

/// Scenario config rejected; message carries line and key context.
struct ConfigError : Error {
  using Error::Error;
};

/// A closed-loop run stopped before its end time. Carries the timestamp of
/// the offending integrator stage.
struct SimulationAbort : Error {
  SimulationAbort(double t, const std::string& why)
      : Error("t=" + std::to_string(t) + ": " + why), time(t), reason(why) {}
  double time;
  std::string reason;
};

}  // namespace fourws
