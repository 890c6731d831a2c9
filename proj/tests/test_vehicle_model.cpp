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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fourws/vehicle_model.hpp"

using namespace fourws;

namespace {
const VehicleParams kParams{2.7, 1.35};
}

TEST_CASE("zero steering gives pure forward motion") {
  const GlobalDerivative d = global_derivatives({0, 0, 0}, {0, 0}, kParams, 5.0);
  CHECK(d.dx == 5.0);
  CHECK(d.dy == 0.0);
  CHECK(d.dpsi == 0.0);
}

TEST_CASE("equal front and rear angles produce crab motion with zero yaw rate") {
  const GlobalDerivative d = global_derivatives({0, 0, 0}, {0.3, 0.3}, kParams, 5.0);
  CHECK(d.dpsi == 0.0);
  CHECK(d.dx == Catch::Approx(5.0 * std::cos(0.3)).epsilon(1e-15));
  CHECK(d.dy == Catch::Approx(5.0 * std::sin(0.3)).epsilon(1e-15));
}

TEST_CASE("opposite-phase steering, direct evaluation") {
  // psi=0, delta_f=0.2, delta_r=-0.2, V=5, f=2.7 (values recomputed at 30
  // digits from the model equations)
  const GlobalDerivative d = global_derivatives({0, 0, 0}, {0.2, -0.2}, kParams, 5.0);
  CHECK(d.dx == Catch::Approx(4.90033288920620815562).epsilon(1e-14));
  CHECK(d.dy == Catch::Approx(-0.99334665397530607730).epsilon(1e-14));
  CHECK(d.dpsi == Catch::Approx(0.73581233627800450170).epsilon(1e-14));
}

TEST_CASE("rear-axle speed always equals the commanded speed") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> angle(-1.0, 1.0);
  std::uniform_real_distribution<double> yaw(-10.0, 10.0);
  std::uniform_real_distribution<double> speed(0.1, 40.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = speed(rng);
    const GlobalDerivative d =
        global_derivatives({0, 0, yaw(rng)}, {angle(rng), angle(rng)}, kParams, v);
    CHECK(std::abs(std::hypot(d.dx, d.dy) - v) <= 1e-12 * v);
  }
}

TEST_CASE("model derivatives satisfy the kinematic constraints") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> steer(-0.5, 0.5);
  std::uniform_real_distribution<double> yaw(-10.0, 10.0);
  std::uniform_real_distribution<double> speed(0.1, 100.0);
  for (int i = 0; i < 10000; ++i) {
    const GlobalState state{0, 0, yaw(rng)};
    const SteeringInput input{steer(rng), steer(rng)};
    const double v = speed(rng);
    const GlobalDerivative d = global_derivatives(state, input, kParams, v);
    const auto r = constraint_residuals(state, d, input, v, kParams);
    CHECK(std::abs(r[0]) < 1e-12);
    CHECK(std::abs(r[1]) < 1e-12);
    CHECK(std::abs(r[2]) < 1e-12);
  }
}

TEST_CASE("constraint residuals flag inconsistent derivatives") {
  const GlobalState state{0, 0, 0};
  const SteeringInput input{0.0, 0.1};
  // forward motion ignoring the rear steering angle violates the rear
  // lateral constraint by V*sin(delta_r)
  const GlobalDerivative d{5.0, 0.0, 0.0};
  const auto r = constraint_residuals(state, d, input, 5.0, kParams);
  CHECK(r[1] == Catch::Approx(5.0 * std::sin(0.1)).epsilon(1e-15));

  // doubling a consistent derivative violates the speed constraint by exactly V
  const GlobalDerivative ok = global_derivatives(state, input, kParams, 5.0);
  const GlobalDerivative scaled{2 * ok.dx, 2 * ok.dy, 2 * ok.dpsi};
  const auto r2 = constraint_residuals(state, scaled, input, 5.0, kParams);
  CHECK(r2[2] == Catch::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("rotating the yaw angle rotates the velocity with it") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> steer(-0.8, 0.8);
  std::uniform_real_distribution<double> yaw(-6.0, 6.0);
  for (int i = 0; i < 1000; ++i) {
    const double psi = yaw(rng), shift = yaw(rng);
    const SteeringInput input{steer(rng), steer(rng)};
    const GlobalDerivative base = global_derivatives({0, 0, psi}, input, kParams, 5.0);
    const GlobalDerivative rot = global_derivatives({0, 0, psi + shift}, input, kParams, 5.0);
    const double c = std::cos(-shift), s = std::sin(-shift);
    CHECK(rot.dx * c - rot.dy * s == Catch::Approx(base.dx).margin(1e-12));
    CHECK(rot.dx * s + rot.dy * c == Catch::Approx(base.dy).margin(1e-12));
    CHECK(rot.dpsi == Catch::Approx(base.dpsi).margin(1e-15));
  }
}

TEST_CASE("zero rear steering reduces to the classical bicycle model") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> steer(-1.3, 1.3);
  for (int i = 0; i < 1000; ++i) {
    const double df = steer(rng);
    const GlobalDerivative d = global_derivatives({0, 0, 0.4}, {df, 0.0}, kParams, 7.0);
    CHECK(d.dpsi == Catch::Approx(7.0 * std::tan(df) / 2.7).epsilon(1e-13));
  }
}

TEST_CASE("steering guard and singularity errors") {
  CHECK_THROWS_AS(global_derivatives({0, 0, 0}, {1.45, 0.0}, kParams, 5.0), SteerGuardError);
  CHECK_THROWS_AS(global_derivatives({0, 0, 0}, {-1.5, 0.0}, kParams, 5.0), SteerGuardError);
  CHECK_NOTHROW(global_derivatives({0, 0, 0}, {1.4, 0.0}, kParams, 5.0));
  CHECK_THROWS_AS(global_derivatives({0, 0, 0}, {0.0, 0.0}, kParams, 0.0), Error);
}

TEST_CASE("lateral acceleration at the center of gravity") {
  CHECK(lateral_acceleration(0, 0, 0, 0, 20.0, kParams) == 0.0);
  CHECK(lateral_acceleration(0.5, 0, 0, 0, 20.0, kParams) == Catch::Approx(10.0).epsilon(1e-15));
  // recomputed at 30 digits: 5*0.55*cos(0.2) + 1.35*0.1
  CHECK(lateral_acceleration(0.5, 0.1, 0.2, 0.05, 5.0, kParams) ==
        Catch::Approx(2.83018308906341448559).epsilon(1e-14));
}

TEST_CASE("vehicle parameter validation") {
  CHECK_NOTHROW(validate(VehicleParams{2.7, 1.35}));
  CHECK_THROWS_AS(validate(VehicleParams{0.0, 0.0}), Error);
  CHECK_THROWS_AS(validate(VehicleParams{2.7, 3.0}), Error);
  CHECK_THROWS_AS(validate(VehicleParams{2.7, -0.1}), Error);
}
