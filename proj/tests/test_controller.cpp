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

#include "fourws/controller.hpp"
#include "fourws/stability.hpp"

using namespace fourws;

namespace {
const VehicleParams kParams{2.7, 1.35};
}

TEST_CASE("feedforward steering angle") {
  CHECK(feedforward(0.0, kParams).front == 0.0);
  CHECK(feedforward(0.0, kParams).rear == 0.0);
  // atan(0.27) and atan(0.027), recomputed at 30 digits
  CHECK(feedforward(0.1, kParams).front == Catch::Approx(0.26371183446226612016).epsilon(1e-15));
  CHECK(feedforward(0.01, kParams).front == Catch::Approx(0.02699344186828791061).epsilon(1e-15));
  CHECK(feedforward(0.1, kParams).rear == 0.0);
}

TEST_CASE("proportional feedback") {
  const ControlGains g{0.00675, 0.27, 0.5};
  CHECK(feedback(0, 0, g).front == 0.0);
  CHECK(feedback(0, 0, g).rear == 0.0);

  const SteeringInput u = feedback(2.0, 0.0, g);
  CHECK(u.front == Catch::Approx(-0.0135).epsilon(1e-15));
  CHECK(u.rear == Catch::Approx(-0.00675).epsilon(1e-15));

  const SteeringInput w = feedback(0.0, 0.1, {0.00675, 0.27, -1.0});
  CHECK(w.front == Catch::Approx(-0.027).epsilon(1e-15));
  CHECK(w.rear == Catch::Approx(0.027).epsilon(1e-15));
}

TEST_CASE("rear command is exactly the coupled front command") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const ControlGains g{dist(rng), dist(rng), dist(rng)};
    const SteeringInput u = feedback(dist(rng), dist(rng), g);
    CHECK(u.rear == g.a * u.front);
  }
}

TEST_CASE("feedback is linear in the errors") {
  const ControlGains g{0.081, 1.08, -0.5};
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double e = dist(rng), th = dist(rng), alpha = 2.0 * dist(rng);
    const SteeringInput u = feedback(e, th, g);
    const SteeringInput su = feedback(alpha * e, alpha * th, g);
    CHECK(su.front == Catch::Approx(alpha * u.front).margin(1e-15));
    CHECK(su.rear == Catch::Approx(alpha * u.rear).margin(1e-15));
  }
}

TEST_CASE("zero coupling recovers a front-wheel-steering vehicle") {
  const ControllerConfig cfg{{0.081, 1.08, 0.0}, true};
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const SteeringInput u = command({0, dist(rng), 0.3 * dist(rng)}, 0.1, cfg, kParams);
    CHECK(u.rear == 0.0);
  }
}

TEST_CASE("command sums feedforward and feedback") {
  const ControllerConfig ff_only{{0.0, 0.0, 0.5}, true};
  const SteeringInput u = command({0, 0, 0}, 0.1, ff_only, kParams);
  CHECK(u.front == Catch::Approx(0.26371183446226612016).epsilon(1e-15));
  CHECK(u.rear == 0.0);

  const ControllerConfig off{{0.0, 0.0, 0.5}, false};
  const SteeringInput v = command({0, 0, 0}, 0.1, off, kParams);
  CHECK(v.front == 0.0);
  CHECK(v.rear == 0.0);
}

TEST_CASE("command guards the total front angle") {
  // gains placed at lambda0=-1, a=0.5, V=5, kappa=0.1 (oracle-recomputed from
  // the defining gain equations): the 5 m offset commands 1.2905 rad, still
  // inside the 1.4 rad guard
  const ControlGains g = place_double_pole({-1.0}, 0.5, 5.0, kParams, 0.1).gains;
  CHECK(g.k1 == Catch::Approx(0.20534998601886793).epsilon(1e-10));
  CHECK(g.k2 == Catch::Approx(1.60555503775049).epsilon(1e-10));
  const ControllerConfig cfg{g, true};
  const SteeringInput u = command({0, -5.0, 0}, 0.1, cfg, kParams);
  CHECK(u.front == Catch::Approx(0.263711834 + 5.0 * g.k1).epsilon(1e-9));
  CHECK(std::abs(u.front) < kSteerGuard);

  // at a=1 the same scenario demands 2.264 rad and must abort, not clamp
  const ControlGains crab = place_double_pole({-1.0}, 1.0, 5.0, kParams, 0.1).gains;
  const ControllerConfig crab_cfg{crab, true};
  CHECK_THROWS_AS(command({0, -5.0, 0}, 0.1, crab_cfg, kParams), SteerGuardError);
}

TEST_CASE("command at zero error tracks the path exactly") {
  for (double kappa : {0.0, 0.01, 0.1}) {
    for (double a : {-1.0, 0.0, 0.5}) {
      const ControllerConfig cfg{{0.081, 1.08, a}, true};
      const SteeringInput u = command({0, 0, 0}, kappa, cfg, kParams);
      const PathFrameDerivative d = path_frame_derivatives({0, 0, 0}, kappa, u, kParams, 5.0);
      CHECK(d.ds > 0.0);
      CHECK(d.de == 0.0);
      CHECK(std::abs(d.dtheta) < 1e-14);
    }
  }
}
