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

#include "fourws/stability.hpp"

using namespace fourws;

namespace {
const VehicleParams kParams{2.7, 1.35};
}

TEST_CASE("characteristic coefficients") {
  const CharPoly p = char_coeffs({0.1, 0.2, 0.0}, 5.0, kParams, 0.0);
  CHECK(p.c1 == Catch::Approx(0.37037037037037037).epsilon(1e-15));
  CHECK(p.c0 == Catch::Approx(0.92592592592592593).epsilon(1e-15));

  // a = 1, straight: the constant coefficient vanishes identically
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const CharPoly q = char_coeffs({dist(rng), dist(rng), 1.0}, 20.0, kParams, 0.0);
    CHECK(q.c0 == 0.0);
  }
}

TEST_CASE("closed-loop matrix matches its characteristic polynomial") {
  SECTION("front-wheel steering, straight road") {
    const Mat2 m = closed_loop_matrix({0.1, 0.2, 0.0}, 5.0, kParams, 0.0);
    CHECK(m.m00 == 0.0);
    CHECK(m.m01 == 5.0);
    CHECK(m.m10 == Catch::Approx(-5.0 * 0.1 / 2.7).epsilon(1e-15));
    CHECK(m.m11 == Catch::Approx(-5.0 * 0.2 / 2.7).epsilon(1e-15));
  }
  SECTION("zero gains leave the open-loop matrix") {
    const Mat2 m = closed_loop_matrix({0, 0, 0.7}, 5.0, kParams, 0.0);
    CHECK(m.m00 == 0.0);
    CHECK(m.m01 == 5.0);
    CHECK(m.m10 == 0.0);
    CHECK(m.m11 == 0.0);
  }
  SECTION("trace and determinant equal -c1 and c0") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> gain(-1.0, 1.0);
    std::uniform_real_distribution<double> coupling(-1.5, 1.5);
    std::uniform_real_distribution<double> speed(0.5, 30.0);
    std::uniform_real_distribution<double> curvature(-0.1, 0.1);
    for (int i = 0; i < 10000; ++i) {
      const ControlGains g{gain(rng), gain(rng), coupling(rng)};
      const double v = speed(rng), k = curvature(rng);
      const Mat2 m = closed_loop_matrix(g, v, kParams, k);
      const CharPoly p = char_coeffs(g, v, kParams, k);
      CHECK(m.trace() == Catch::Approx(-p.c1).margin(1e-12));
      CHECK(m.det() == Catch::Approx(p.c0).margin(1e-12));
    }
  }
}

TEST_CASE("eigenvalues of a 2x2 matrix") {
  const auto rot = eigenvalues({0, 1, -1, 0});
  CHECK(rot[0] == std::complex<double>(0, -1));
  CHECK(rot[1] == std::complex<double>(0, 1));

  const auto nilpotent = eigenvalues({0, 5, 0, 0});
  CHECK(nilpotent[0] == std::complex<double>(0, 0));
  CHECK(nilpotent[1] == std::complex<double>(0, 0));

  const auto real = eigenvalues({-3, 0, 0, -1});
  CHECK(real[0].real() == Catch::Approx(-3.0));
  CHECK(real[1].real() == Catch::Approx(-1.0));
}

TEST_CASE("Routh-Hurwitz classification") {
  CHECK(classify({0.00675, 0.27, 0.0}, 20.0, kParams, 0.0) == Stability::stable);
  CHECK(classify({-0.01, 0.27, 0.0}, 20.0, kParams, 0.0) == Stability::unstable);
  CHECK(classify({0.0, 0.3, 0.0}, 20.0, kParams, 0.0) == Stability::marginal);
}

TEST_CASE("classification agrees with the eigenvalue oracle") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> gain(-1.0, 1.0);
  std::uniform_real_distribution<double> coupling(-1.5, 1.5);
  std::uniform_real_distribution<double> speed(0.5, 30.0);
  std::uniform_real_distribution<double> curvature(-0.1, 0.1);
  int checked = 0;
  for (int i = 0; i < 100000; ++i) {
    const ControlGains g{gain(rng), gain(rng), coupling(rng)};
    const double v = speed(rng);
    const double k = (i % 4 == 0) ? 0.0 : curvature(rng);
    const CharPoly p = char_coeffs(g, v, kParams, k);
    if (std::abs(p.c1) <= kCoeffTol || std::abs(p.c0) <= kCoeffTol) continue;  // marginal band
    ++checked;
    const auto eig = eigenvalues(closed_loop_matrix(g, v, kParams, k));
    const double max_re = std::max(eig[0].real(), eig[1].real());
    const bool oracle_stable = max_re < 0.0;
    CHECK((classify(g, v, kParams, k) == Stability::stable) == oracle_stable);
  }
  CHECK(checked > 90000);
}

TEST_CASE("classification does not depend on the speed") {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> gain(-1.0, 1.0);
  std::uniform_real_distribution<double> coupling(-1.5, 1.5);
  for (int i = 0; i < 10000; ++i) {
    const ControlGains g{gain(rng), gain(rng), coupling(rng)};
    const double k = (i % 2 == 0) ? 0.0 : 0.1;
    CHECK(classify(g, 5.0, kParams, k) == classify(g, 20.0, kParams, k));
  }
}

TEST_CASE("at a=1 on a straight road the yaw gain is irrelevant") {
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> gain(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double k1 = gain(rng);
    CHECK(classify({k1, gain(rng), 1.0}, 20.0, kParams, 0.0) ==
          classify({k1, gain(rng), 1.0}, 20.0, kParams, 0.0));
  }
}

TEST_CASE("stability boundary lines") {
  const AxisRange range{-1.0, 1.0, 401};
  SECTION("a=0, straight: the axes") {
    const auto lines = boundary_curves(0.0, kParams, 0.0, range, range);
    REQUIRE(lines.size() == 2);
    for (const Vec2& p : lines[0].points) CHECK(p.x == 0.0);  // k1 = 0
    for (const Vec2& p : lines[1].points) CHECK(p.y == 0.0);  // k2 = 0
  }
  SECTION("a=0, curved: k1 shifted to -f*kappa^2") {
    const auto lines = boundary_curves(0.0, kParams, 0.1, range, range);
    for (const Vec2& p : lines[0].points) CHECK(p.x == Catch::Approx(-0.027).epsilon(1e-15));
  }
  SECTION("a=1: the single line k1 = 0") {
    const auto lines = boundary_curves(1.0, kParams, 0.0, range, range);
    REQUIRE(lines.size() == 1);
    for (const Vec2& p : lines[0].points) CHECK(p.x == 0.0);
  }
  SECTION("sampled boundary points are not classified stable") {
    for (double a : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
      for (double kappa : {0.0, 0.1}) {
        for (const auto& line : boundary_curves(a, kParams, kappa, range, range)) {
          for (const Vec2& p : line.points) {
            const CharPoly c = char_coeffs({p.x, p.y, a}, 5.0, kParams, kappa);
            CHECK(std::min(std::abs(c.c1), std::abs(c.c0)) <= kCoeffTol);
            CHECK(classify({p.x, p.y, a}, 5.0, kParams, kappa) != Stability::stable);
          }
        }
      }
    }
  }
}

TEST_CASE("pole placement branches") {
  SECTION("straight road") {
    const PlacementResult r = place_double_pole({-1.0}, 0.0, 20.0, kParams, 0.0);
    CHECK(r.gains.k1 == Catch::Approx(0.00675).epsilon(1e-14));
    CHECK(r.gains.k2 == Catch::Approx(0.27).epsilon(1e-14));
    CHECK_FALSE(r.fallback_used);

    const PlacementResult r2 = place_double_pole({-1.0}, 0.5, 20.0, kParams, 0.0);
    CHECK(r2.gains.k1 == Catch::Approx(0.0135).epsilon(1e-14));
    CHECK(r2.gains.k2 == Catch::Approx(0.50355).epsilon(1e-14));
  }
  SECTION("curved road, front-wheel steering") {
    const PlacementResult r = place_double_pole({-1.0}, 0.0, 20.0, kParams, 0.01);
    CHECK(r.gains.k1 == Catch::Approx(0.00648).epsilon(1e-14));
    CHECK(r.gains.k2 == Catch::Approx(0.27).epsilon(1e-14));
  }
  SECTION("curved road, coupled steering") {
    const PlacementResult r = place_double_pole({-1.0}, 0.5, 5.0, kParams, 0.1);
    CHECK(r.gains.k1 == Catch::Approx(0.20534998601886793).epsilon(1e-10));
    CHECK(r.gains.k2 == Catch::Approx(1.60555503775049).epsilon(1e-10));

    const PlacementResult crab = place_double_pole({-1.0}, 1.0, 5.0, kParams, 0.1);
    CHECK(crab.gains.k1 == Catch::Approx(0.4).epsilon(1e-13));
    CHECK(crab.gains.k2 == Catch::Approx(-3.0).epsilon(1e-13));
  }
  SECTION("structural origin pole at a=1 on a straight road") {
    CHECK_THROWS_AS(place_double_pole({-1.0}, 1.0, 20.0, kParams, 0.0), PlacementError);
  }
  SECTION("boundary study at lambda0 = 0 is allowed, positive roots are not") {
    const PlacementResult r = place_double_pole({0.0}, 0.0, 20.0, kParams, 0.0);
    CHECK(r.gains.k1 == 0.0);
    CHECK(r.gains.k2 == 0.0);
    CHECK_THROWS_AS(place_double_pole({0.5}, 0.0, 20.0, kParams, 0.0), PlacementError);
  }
}

TEST_CASE("pole placement round-trip over the parameter grid") {
  for (double a : {-1.5, -1.0, -0.5, 0.0, 0.5, 1.5}) {
    for (double v : {5.0, 20.0}) {
      for (double kappa : {0.0, 0.01, 0.1}) {
        for (double lambda0 : {-1.0, -2.0, -3.0}) {
          const PlacementResult r = place_double_pole({lambda0}, a, v, kParams, kappa);
          CHECK_FALSE(r.fallback_used);
          const CharPoly p = char_coeffs(r.gains, v, kParams, kappa);
          CHECK(std::abs(p.c1 + 2.0 * lambda0) <= 1e-10 * std::abs(2.0 * lambda0));
          CHECK(std::abs(p.c0 - lambda0 * lambda0) <= 1e-10 * lambda0 * lambda0);
          const auto eig = eigenvalues(closed_loop_matrix(r.gains, v, kParams, kappa));
          CHECK(std::abs(eig[0] - std::complex<double>(lambda0, 0)) < 1e-9);
          CHECK(std::abs(eig[1] - std::complex<double>(lambda0, 0)) < 1e-9);
          CHECK(classify(r.gains, v, kParams, kappa) == Stability::stable);
        }
      }
    }
  }
}

TEST_CASE("region sampling") {
  const AxisRange range{-0.1, 1.0, 23};
  SECTION("a=0, straight: stable iff both gains positive") {
    const StabilityGrid grid = sample_region(range, range, 0.0, 5.0, kParams, 0.0);
    for (int i1 = 0; i1 < range.count; ++i1) {
      for (int i2 = 0; i2 < range.count; ++i2) {
        const bool positive = grid.k1_at(i1) > 0.0 && grid.k2_at(i2) > 0.0;
        CHECK((grid.at(i1, i2) == Stability::stable) == positive);
      }
    }
  }
  SECTION("a=1.5 admits stable cells with negative k1") {
    const AxisRange sym{-1.0, 1.0, 41};
    const StabilityGrid grid = sample_region(sym, sym, 1.5, 20.0, kParams, 0.0);
    bool found = false;
    for (int i1 = 0; i1 < sym.count && !found; ++i1)
      for (int i2 = 0; i2 < sym.count && !found; ++i2)
        found = grid.k1_at(i1) < 0.0 && grid.at(i1, i2) == Stability::stable;
    CHECK(found);
  }
  SECTION("thread count does not change the cells") {
    const AxisRange sym{-1.0, 1.0, 101};
    const StabilityGrid one = sample_region(sym, sym, -0.5, 5.0, kParams, 0.1, 1);
    const StabilityGrid four = sample_region(sym, sym, -0.5, 5.0, kParams, 0.1, 4);
    REQUIRE(one.cells.size() == four.cells.size());
    for (std::size_t i = 0; i < one.cells.size(); ++i) CHECK(one.cells[i] == four.cells[i]);
  }
  SECTION("pole-placed gains land in the stable region") {
    for (double a : {-1.0, 0.0, 0.5}) {
      const ControlGains g = place_double_pole({-1.0}, a, 5.0, kParams, 0.1).gains;
      CHECK(classify(g, 5.0, kParams, 0.1) == Stability::stable);
    }
  }
  SECTION("degenerate axis counts are rejected") {
    CHECK_THROWS_AS(sample_region({0, 1, 1}, range, 0.0, 5.0, kParams, 0.0), Error);
  }
}
