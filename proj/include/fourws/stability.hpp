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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "fourws/controller.hpp"
#include "fourws/errors.hpp"
#include "fourws/numeric.hpp"
#include "fourws/vehicle_model.hpp"

namespace fourws {

/// Monic characteristic polynomial lambda^2 + c1*lambda + c0 of the linearized
/// closed loop.
struct CharPoly {
  double c1{};  // [1/s]
  double c0{};  // [1/s^2]
};

/// Closed-loop characteristic coefficients:
///   c1 = (V/f) (f a k1 + (1-a) k2)
///   c0 = (V^2/f) ((1-a) k1 + (1 - a k2) f kappa^2)
/// The curvature- and gain-dependent factors are V-free, so the signs of c1
/// and c0 (hence the stability region) do not depend on the speed.
inline CharPoly char_coeffs(const ControlGains& g, double speed, const VehicleParams& params,
                            double curvature) {
  const double f = params.wheelbase;
  const double inner1 = f * g.a * g.k1 + (1.0 - g.a) * g.k2;
  const double inner0 = (1.0 - g.a) * g.k1 + (1.0 - g.a * g.k2) * f * curvature * curvature;
  return {(speed / f) * inner1, (speed * speed / f) * inner0};
}

struct Mat2 {
  double m00{}, m01{}, m10{}, m11{};

  double trace() const { return m00 + m11; }
  double det() const { return m00 * m11 - m01 * m10; }
};

/// State matrix A + B K of the linearized error dynamics x = (e, theta) with
/// the feedback u = K x substituted:
///   A = [0, V; -V kappa^2, 0],  B = [0, V; V/f, -V/f],
///   K = [-k1, -k2; -a k1, -a k2].
inline Mat2 closed_loop_matrix(const ControlGains& g, double speed, const VehicleParams& params,
                               double curvature) {
  const double f = params.wheelbase;
  return {-g.a * speed * g.k1, speed * (1.0 - g.a * g.k2),
          -speed * curvature * curvature - (speed / f) * (1.0 - g.a) * g.k1,
          -(speed / f) * (1.0 - g.a) * g.k2};
}

/// Eigenvalues of a 2x2 matrix via the quadratic formula on its trace and
/// determinant, ordered by (real, imaginary).
inline std::array<std::complex<double>, 2> eigenvalues(const Mat2& m) {
  return solve_monic_quadratic(-m.trace(), m.det());
}

enum class Stability : std::uint8_t {
  unstable = 0,
  stable = 1,
  marginal = 2,
};

/// Tolerance of the marginal band on the characteristic coefficients.
inline constexpr double kCoeffTol = 1e-12;

/// Routh-Hurwitz classification of the second-order closed loop: stable iff
/// both coefficients are positive; a coefficient inside the tolerance band
/// (with neither significantly negative) is marginal.
inline Stability classify(const ControlGains& g, double speed, const VehicleParams& params,
                          double curvature, double tol = kCoeffTol) {
  const CharPoly p = char_coeffs(g, speed, params, curvature);
  if (p.c1 > tol && p.c0 > tol) return Stability::stable;
  if ((std::abs(p.c1) <= tol || std::abs(p.c0) <= tol) && p.c1 >= -tol && p.c0 >= -tol)
    return Stability::marginal;
  return Stability::unstable;
}

struct BoundaryLine {
  int id{};
  std::vector<Vec2> points;  // x = k1, y = k2
};

struct AxisRange {
  double min{};
  double max{};
  int count{};
};

/// Stability boundaries in the (k1, k2) plane. For a != 1 these are the two
/// lines where c0 resp. c1 vanish:
///   k1 = (a k2 - 1) f kappa^2 / (1-a)   (parameterized by k2)
///   k2 = -f a k1 / (1-a)                (parameterized by k1)
/// For a = 1 the single boundary is k1 = 0, any k2.
inline std::vector<BoundaryLine> boundary_curves(double a, const VehicleParams& params,
                                                 double curvature, const AxisRange& k1_range,
                                                 const AxisRange& k2_range, int samples = 101) {
  std::vector<BoundaryLine> lines;
  const double f = params.wheelbase;
  if (a == 1.0) {
    BoundaryLine l{0, {}};
    for (int i = 0; i < samples; ++i)
      l.points.push_back({0.0, grid_node(k2_range.min, k2_range.max, samples, i)});
    lines.push_back(std::move(l));
    return lines;
  }
  BoundaryLine l0{0, {}};  // c0 = 0
  for (int i = 0; i < samples; ++i) {
    const double k2 = grid_node(k2_range.min, k2_range.max, samples, i);
    l0.points.push_back({(a * k2 - 1.0) * f * curvature * curvature / (1.0 - a), k2});
  }
  lines.push_back(std::move(l0));
  BoundaryLine l1{1, {}};  // c1 = 0
  for (int i = 0; i < samples; ++i) {
    const double k1 = grid_node(k1_range.min, k1_range.max, samples, i);
    l1.points.push_back({k1, -f * a * k1 / (1.0 - a)});
  }
  lines.push_back(std::move(l1));
  return lines;
}

struct PolePlacementSpec {
  double lambda0{};  // desired double root [1/s], <= 0
};

/// Result of a pole placement. `printed_residual` is the relative round-trip
/// defect |c1 + 2 lambda0| + |c0 - lambda0^2| of the closed-form branch;
/// `fallback_used` is set when that branch failed the round-trip and the gains
/// were recomputed from the defining 2x2 linear system instead (the normative
/// solution).
struct PlacementResult {
  ControlGains gains;
  double printed_residual{};
  bool fallback_used{false};
};

namespace detail {

inline double placement_residual(const ControlGains& g, double speed,
                                 const VehicleParams& params, double curvature, double lambda0) {
  const CharPoly p = char_coeffs(g, speed, params, curvature);
  const double s1 = std::max(1.0, std::abs(2.0 * lambda0));
  const double s0 = std::max(1.0, lambda0 * lambda0);
  return std::abs(p.c1 + 2.0 * lambda0) / s1 + std::abs(p.c0 - lambda0 * lambda0) / s0;
}

/// Direct solution of the gain equations
///   f a k1 + (1-a) k2            = -2 lambda0 f / V
///   (1-a) k1 - a f kappa^2 k2    = f (lambda0^2/V^2 - kappa^2)
inline ControlGains place_linear_system(double lambda0, double a, double speed,
                                        const VehicleParams& params, double curvature) {
  const double f = params.wheelbase;
  const double m11 = f * a, m12 = 1.0 - a;
  const double m21 = 1.0 - a, m22 = -a * f * curvature * curvature;
  const double b1 = -2.0 * lambda0 * f / speed;
  const double b2 = f * (lambda0 * lambda0 / (speed * speed) - curvature * curvature);
  const double det = m11 * m22 - m12 * m21;
  if (det == 0.0)
    throw PlacementError("gain equations degenerate (a = 1 with zero curvature)");
  return {(b1 * m22 - m12 * b2) / det, (m11 * b2 - b1 * m21) / det, a};
}

}  // namespace detail

/// Gains that place a double closed-loop root at lambda0. Three closed-form
/// branches cover (kappa = 0, a != 1), (kappa != 0, a = 0) and
/// (kappa != 0, a != 0); every result is verified against the characteristic
/// coefficients and recomputed from the defining linear system if the
/// closed form ever failed the round-trip check.
///
/// For a = 1 on a straight path the constant coefficient vanishes identically
/// (one pole is structurally pinned at the origin), so no double root at
/// lambda0 != 0 exists and the request is rejected.
inline PlacementResult place_double_pole(const PolePlacementSpec& spec, double a, double speed,
                                         const VehicleParams& params, double curvature) {
  const double lambda0 = spec.lambda0;
  if (!(speed > 0.0)) throw Error("place_double_pole: speed must be > 0");
  if (!std::isfinite(lambda0) || lambda0 > 0.0)
    throw PlacementError("lambda0 must be finite and <= 0 (got " + std::to_string(lambda0) + ")");
  const double f = params.wheelbase;
  ControlGains g{0.0, 0.0, a};
  if (curvature == 0.0) {
    if (a == 1.0)
      throw PlacementError(
          "a = 1 on a straight path pins one closed-loop pole at the origin; "
          "a double root cannot be placed");
    g.k1 = f * lambda0 * lambda0 / (speed * speed * (1.0 - a));
    g.k2 = (-lambda0 * f / (speed * (1.0 - a))) *
           (2.0 + lambda0 * a * f / (speed * (1.0 - a)));
  } else if (a == 0.0) {
    g.k1 = f * (lambda0 * lambda0 / (speed * speed) - curvature * curvature);
    g.k2 = -2.0 * lambda0 * f / speed;
  } else {
    const double denom =
        speed * speed * (a * a * f * f * curvature * curvature + (1.0 - a) * (1.0 - a));
    if (denom == 0.0) throw PlacementError("gain equations degenerate");
    const double num = speed * speed * a * f * curvature * curvature -
                       2.0 * speed * lambda0 * (1.0 - a) - a * f * lambda0 * lambda0;
    g.k1 = -2.0 * lambda0 / (speed * a) + (num / denom) * (1.0 - 1.0 / a);
    g.k2 = f * num / denom;
  }
  PlacementResult result{g, detail::placement_residual(g, speed, params, curvature, lambda0),
                         false};
  if (result.printed_residual > 1e-10) {
    result.gains = detail::place_linear_system(lambda0, a, speed, params, curvature);
    result.fallback_used = true;
  }
  return result;
}

/// Classification of every node of a (k1, k2) grid; `cells` is row-major with
/// k1 as the slow index.
struct StabilityGrid {
  AxisRange k1_range;
  AxisRange k2_range;
  std::vector<Stability> cells;

  Stability at(int i1, int i2) const { return cells[static_cast<std::size_t>(i1) * k2_range.count + i2]; }
  double k1_at(int i1) const { return grid_node(k1_range.min, k1_range.max, k1_range.count, i1); }
  double k2_at(int i2) const { return grid_node(k2_range.min, k2_range.max, k2_range.count, i2); }
};

/// Classify a gain grid. Cells are independent, so the work may be split
/// across threads; each cell derives its value from its own indices, making
/// the output identical for any thread count.
inline StabilityGrid sample_region(const AxisRange& k1_range, const AxisRange& k2_range, double a,
                                   double speed, const VehicleParams& params, double curvature,
                                   int threads = 1) {
  if (k1_range.count < 2 || k2_range.count < 2)
    throw Error("sample_region: need at least 2 nodes per axis");
  StabilityGrid grid{k1_range, k2_range, {}};
  grid.cells.resize(static_cast<std::size_t>(k1_range.count) * k2_range.count);
  auto work = [&](int row_begin, int row_end) {
    for (int i1 = row_begin; i1 < row_end; ++i1) {
      const double k1 = grid.k1_at(i1);
      for (int i2 = 0; i2 < k2_range.count; ++i2) {
        grid.cells[static_cast<std::size_t>(i1) * k2_range.count + i2] =
            classify({k1, grid.k2_at(i2), a}, speed, params, curvature);
      }
    }
  };
  if (threads <= 1) {
    work(0, k1_range.count);
    return grid;
  }
  std::vector<std::thread> pool;
  const int rows = k1_range.count;
  const int chunk = (rows + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(rows, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
  return grid;
}

}  // namespace fourws
