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
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace fourws {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x{};
  double y{};
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

/// Remove 2*pi jumps from a sampled angle series (in place).
inline void unwrap_angles(std::vector<double>& a) {
  for (std::size_t i = 1; i < a.size(); ++i) {
    a[i] = a[i - 1] + wrap_angle(a[i] - a[i - 1]);
  }
}

/// i-th node of a uniform grid over [lo, hi] with `count` points. Computed as
/// lo + i*(hi-lo)/(count-1) so midpoints of symmetric ranges land exactly.
inline double grid_node(double lo, double hi, int count, int i) {
  if (count < 2) return lo;
  return lo + (static_cast<double>(i) * (hi - lo)) / static_cast<double>(count - 1);
}

/// First derivative of a uniformly sampled series, second-order accurate:
/// central differences inside, one-sided three-point stencils at the ends.
inline std::vector<double> derivative(const std::vector<double>& x, double dt) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (x[1] - x[0]) / dt;
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
  d[0] = (-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * dt);
  d[n - 1] = (3.0 * x[n - 1] - 4.0 * x[n - 2] + x[n - 3]) / (2.0 * dt);
  return d;
}

/// Second derivative companion of `derivative`, same accuracy and stencils.
inline std::vector<double> second_derivative(const std::vector<double>& x, double dt) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 4) {
    if (n == 3) {
      const double v = (x[2] - 2.0 * x[1] + x[0]) / (dt * dt);
      d[0] = d[1] = d[2] = v;
    }
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / (dt * dt);
  d[0] = (2.0 * x[0] - 5.0 * x[1] + 4.0 * x[2] - x[3]) / (dt * dt);
  d[n - 1] = (2.0 * x[n - 1] - 5.0 * x[n - 2] + 4.0 * x[n - 3] - x[n - 4]) / (dt * dt);
  return d;
}

/// Roots of the monic quadratic z^2 + c1*z + c0, ordered by (real, imag).
///
/// A discriminant below the roundoff noise floor of its own evaluation is
/// treated as an exact double root: coefficient errors of a few ulp would
/// otherwise split a true repeated root by ~sqrt(eps) and mask it.
inline std::array<std::complex<double>, 2> solve_monic_quadratic(double c1, double c0) {
  const double disc = c1 * c1 - 4.0 * c0;
  const double noise =
      64.0 * std::numeric_limits<double>::epsilon() * (c1 * c1 + 4.0 * std::abs(c0));
  std::array<std::complex<double>, 2> r;
  if (std::abs(disc) <= noise) {
    r[0] = r[1] = std::complex<double>(-c1 / 2.0, 0.0);
    return r;
  }
  if (disc > 0.0) {
    const double q = -(c1 + std::copysign(std::sqrt(disc), c1)) / 2.0;
    double r0 = q;
    double r1 = (q != 0.0) ? c0 / q : 0.0;
    if (r0 > r1) std::swap(r0, r1);
    r[0] = r0;
    r[1] = r1;
    return r;
  }
  const double re = -c1 / 2.0;
  const double im = std::sqrt(-disc) / 2.0;
  r[0] = {re, -im};
  r[1] = {re, im};
  return r;
}

}  // namespace fourws
