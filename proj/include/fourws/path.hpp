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
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fourws/errors.hpp"
#include "fourws/numeric.hpp"
#include "fourws/vehicle_model.hpp"

namespace fourws {

/// Point of a reference path at arclength s. Heading is in (-pi, pi];
/// curvature is signed, positive when the path curves left.
struct PathPoint {
  double s{};
  double x{};
  double y{};
  double heading{};
  double curvature{};
};

/// State of the vehicle relative to the closest path point: arclength,
/// signed lateral error (positive = left of the path), relative yaw.
struct PathFrameState {
  double s{};
  double lateral_error{};
  double yaw_error{};
};

struct StraightSegment {
  Vec2 origin{};
  double heading{};
};

struct ArcSegment {
  Vec2 center{};
  double radius{};       // > 0
  double start_angle{};  // angle of the start point as seen from the center
  bool left{true};       // turn direction; left = counterclockwise
};

using SegmentShape = std::variant<StraightSegment, ArcSegment>;

struct PiecewiseSegment {
  SegmentShape shape;
  double length{};  // > 0
};

inline PathPoint pose_on(const StraightSegment& seg, double s) {
  const double c = std::cos(seg.heading), sn = std::sin(seg.heading);
  return {s, seg.origin.x + s * c, seg.origin.y + s * sn, wrap_angle(seg.heading), 0.0};
}

inline PathPoint pose_on(const ArcSegment& seg, double s) {
  const double sgn = seg.left ? 1.0 : -1.0;
  const double phi = seg.start_angle + sgn * s / seg.radius;
  return {s, seg.center.x + seg.radius * std::cos(phi), seg.center.y + seg.radius * std::sin(phi),
          wrap_angle(phi + sgn * kPi / 2.0), sgn / seg.radius};
}

inline PathPoint pose_on(const SegmentShape& shape, double s) {
  return std::visit([s](const auto& seg) { return pose_on(seg, s); }, shape);
}

/// Result of a closest-point projection. `lateral_error` is the signed
/// distance e = -(x-x_C) sin(psi_C) + (y-y_C) cos(psi_C); `clamped` is set
/// when the query fell beyond the ends of a finite path and the projection
/// was pinned to the nearer endpoint.
struct Projection {
  PathPoint point;
  double lateral_error{};
  bool clamped{false};
};

namespace detail {

inline double signed_lateral(const PathPoint& p, double x, double y) {
  return -(x - p.x) * std::sin(p.heading) + (y - p.y) * std::cos(p.heading);
}

inline Projection project_onto(const StraightSegment& seg, double x, double y) {
  const double c = std::cos(seg.heading), sn = std::sin(seg.heading);
  const double s = (x - seg.origin.x) * c + (y - seg.origin.y) * sn;
  PathPoint p = pose_on(seg, s);
  return {p, signed_lateral(p, x, y), false};
}

inline Projection project_onto(const ArcSegment& seg, double x, double y) {
  const Vec2 v{x - seg.center.x, y - seg.center.y};
  const double r = norm(v);
  if (r < 1e-9 * std::max(1.0, seg.radius))
    throw ProjectionError("projection ambiguous: query point coincides with the arc center");
  const double phi = std::atan2(v.y, v.x);
  const double sgn = seg.left ? 1.0 : -1.0;
  const double s = sgn * wrap_angle(phi - seg.start_angle) * seg.radius;
  PathPoint p = pose_on(seg, s);
  return {p, signed_lateral(p, x, y), false};
}

inline Projection project_onto(const SegmentShape& shape, double x, double y) {
  return std::visit([&](const auto& seg) { return project_onto(seg, x, y); }, shape);
}

}  // namespace detail

/// Reference path: an unbounded straight line, an unbounded constant-curvature
/// arc, or a finite chain of such segments joined with continuous position and
/// heading.
class ReferencePath {
 public:
  static ReferencePath straight(Vec2 origin, double heading) {
    return ReferencePath(StraightSegment{origin, heading});
  }

  static ReferencePath arc(Vec2 center, double radius, double start_angle, bool left) {
    if (!(radius > 0.0)) throw Error("path: arc radius must be > 0");
    return ReferencePath(ArcSegment{center, radius, start_angle, left});
  }

  /// Arc through `start` with tangent `heading`; curvature > 0 turns left.
  static ReferencePath arc_from_start(Vec2 start, double heading, double curvature) {
    if (curvature == 0.0) throw Error("path: arc curvature must be nonzero");
    const double radius = 1.0 / std::abs(curvature);
    const Vec2 n{-std::sin(heading), std::cos(heading)};
    const Vec2 center = start + (1.0 / curvature) * n;
    const double start_angle = std::atan2(start.y - center.y, start.x - center.x);
    return arc(center, radius, start_angle, curvature > 0.0);
  }

  static ReferencePath piecewise(std::vector<PiecewiseSegment> segments) {
    if (segments.empty()) throw Error("path: piecewise needs at least one segment");
    double total = 0.0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (!(segments[i].length > 0.0)) throw Error("path: segment length must be > 0");
      if (i > 0) {
        const PathPoint prev_end = pose_on(segments[i - 1].shape, segments[i - 1].length);
        const PathPoint next_start = pose_on(segments[i].shape, 0.0);
        const double gap =
            std::hypot(prev_end.x - next_start.x, prev_end.y - next_start.y);
        const double kink = std::abs(wrap_angle(prev_end.heading - next_start.heading));
        if (gap > 1e-9 || kink > 1e-9)
          throw Error("path: segments " + std::to_string(i - 1) + " and " + std::to_string(i) +
                      " do not join continuously (gap " + std::to_string(gap) + " m, kink " +
                      std::to_string(kink) + " rad)");
      }
      total += segments[i].length;
    }
    ReferencePath p(Piecewise{std::move(segments), total});
    return p;
  }

  bool is_finite() const { return std::holds_alternative<Piecewise>(rep_); }

  /// Total length for piecewise paths; unbounded otherwise.
  std::optional<double> length() const {
    if (const auto* pw = std::get_if<Piecewise>(&rep_)) return pw->total;
    return std::nullopt;
  }

  /// 2*pi*R when the path is a full circle (standalone arc); used to keep the
  /// arclength column of recorded traces continuous across projection wraps.
  std::optional<double> arclength_period() const {
    if (const auto* a = std::get_if<ArcSegment>(&rep_)) return 2.0 * kPi * a->radius;
    return std::nullopt;
  }

  /// Position, tangent heading, curvature at arclength s. Straight lines and
  /// arcs accept any s; piecewise paths reject s outside [0, length].
  PathPoint pose_at(double s) const {
    if (const auto* st = std::get_if<StraightSegment>(&rep_)) return pose_on(*st, s);
    if (const auto* a = std::get_if<ArcSegment>(&rep_)) return pose_on(*a, s);
    const auto& pw = std::get<Piecewise>(rep_);
    if (s < 0.0 || s > pw.total)
      throw PathRangeError("arclength " + std::to_string(s) + " outside [0, " +
                           std::to_string(pw.total) + "]");
    double offset = 0.0;
    for (std::size_t i = 0; i < pw.segments.size(); ++i) {
      const double len = pw.segments[i].length;
      const bool last = (i + 1 == pw.segments.size());
      if (s <= offset + len || last) {
        PathPoint p = pose_on(pw.segments[i].shape, s - offset);
        p.s = s;
        return p;
      }
      offset += len;
    }
    throw PathRangeError("unreachable");  // total > 0 guarantees a segment
  }

  /// Closest point of the path to (x, y). Piecewise candidates are evaluated
  /// per segment with arclength clamped to the segment; the global minimum
  /// distance wins, ties broken by smaller s.
  Projection project(double x, double y) const {
    if (const auto* st = std::get_if<StraightSegment>(&rep_))
      return detail::project_onto(*st, x, y);
    if (const auto* a = std::get_if<ArcSegment>(&rep_)) return detail::project_onto(*a, x, y);
    const auto& pw = std::get<Piecewise>(rep_);
    bool have = false;
    Projection best{};
    double best_dist = 0.0;
    double offset = 0.0;
    for (const auto& seg : pw.segments) {
      Projection cand = detail::project_onto(seg.shape, x, y);
      bool clamped = false;
      double local_s = cand.point.s;
      if (local_s < 0.0) {
        local_s = 0.0;
        clamped = true;
      } else if (local_s > seg.length) {
        local_s = seg.length;
        clamped = true;
      }
      if (clamped) {
        cand.point = pose_on(seg.shape, local_s);
        cand.lateral_error = detail::signed_lateral(cand.point, x, y);
      }
      cand.point.s = offset + local_s;
      const double dist = std::hypot(x - cand.point.x, y - cand.point.y);
      if (!have || dist < best_dist ||
          (dist == best_dist && cand.point.s < best.point.s)) {
        have = true;
        best = cand;
        best_dist = dist;
        // interior clamp at a joint is not an endpoint overrun
        best.clamped = clamped && (cand.point.s <= 0.0 || cand.point.s >= pw.total);
      }
    }
    return best;
  }

 private:
  struct Piecewise {
    std::vector<PiecewiseSegment> segments;
    double total{};
  };

  template <class Rep>
  explicit ReferencePath(Rep rep) : rep_(std::move(rep)) {}

  std::variant<StraightSegment, ArcSegment, Piecewise> rep_;
};

/// Projection of a global pose into the path frame.
struct PathFrameConversion {
  PathFrameState state;
  double curvature{};
  bool clamped{false};
};

/// Convert a global pose to (s, e, theta) relative to the path. The relative
/// yaw is wrapped to (-pi, pi]; the projection must lie inside the validity
/// tube |kappa*e| < 1.
inline PathFrameConversion to_path_frame(const GlobalState& state, const ReferencePath& path) {
  const Projection pr = path.project(state.x, state.y);
  if (std::abs(pr.point.curvature * pr.lateral_error) >= 1.0 - 1e-9)
    throw SingularityError("projection tube violated: |kappa*e| = " +
                           std::to_string(std::abs(pr.point.curvature * pr.lateral_error)));
  return {{pr.point.s, pr.lateral_error, wrap_angle(state.psi - pr.point.heading)},
          pr.point.curvature, pr.clamped};
}

struct PathFrameDerivative {
  double ds{};
  double de{};
  double dtheta{};
};

/// Vehicle model expressed in the path frame:
///   ds     = V cos(theta + delta_r) / (1 - kappa e)
///   de     = V sin(theta + delta_r)
///   dtheta = -kappa V cos(theta + delta_r) / (1 - kappa e)
///            + V sin(delta_f - delta_r) / (f cos delta_f)
inline PathFrameDerivative path_frame_derivatives(const PathFrameState& pf, double curvature,
                                                  const SteeringInput& input,
                                                  const VehicleParams& params, double speed) {
  const double ke = curvature * pf.lateral_error;
  if (std::abs(ke) >= 1.0 - 1e-9)
    throw SingularityError("path-frame tube violated: |kappa*e| = " + std::to_string(std::abs(ke)));
  const double cf = std::cos(input.front);
  if (std::abs(cf) < kCosSingularTol)
    throw SingularityError("cos(delta_f) = " + std::to_string(cf) + " is singular");
  const double c = std::cos(pf.yaw_error + input.rear);
  const double progression = speed * c / (1.0 - ke);
  return {progression, speed * std::sin(pf.yaw_error + input.rear),
          -curvature * progression +
              speed * std::sin(input.front - input.rear) / (params.wheelbase * cf)};
}

}  // namespace fourws
