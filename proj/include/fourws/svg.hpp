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
#include <ostream>
#include <string>
#include <vector>

#include "fourws/csv.hpp"
#include "fourws/sim.hpp"
#include "fourws/stability.hpp"

// Thin plotting layer over the CSV data: static line plots and a region
// raster, nothing interactive.

namespace fourws::svg {

namespace detail {

struct Mapper {
  double x0, x1, y0, y1;  // data range
  double px0, px1, py0, py1;  // pixel range (y flipped)

  double x(double v) const { return px0 + (v - x0) / (x1 - x0) * (px1 - px0); }
  double y(double v) const { return py0 + (v - y0) / (y1 - y0) * (py1 - py0); }
};

inline void axes(std::ostream& os, const Mapper& m, const std::string& xlabel,
                 const std::string& ylabel) {
  os << "<rect x='" << m.px0 << "' y='" << m.py1 << "' width='" << (m.px1 - m.px0)
     << "' height='" << (m.py0 - m.py1) << "' fill='none' stroke='#333'/>\n";
  auto label = [&os](double px, double py, const std::string& text, const char* anchor) {
    os << "<text x='" << px << "' y='" << py << "' font-size='11' text-anchor='" << anchor
       << "' fill='#333'>" << text << "</text>\n";
  };
  label(m.px0, m.py0 + 14, format_double(m.x0), "start");
  label(m.px1, m.py0 + 14, format_double(m.x1), "end");
  label((m.px0 + m.px1) / 2, m.py0 + 26, xlabel, "middle");
  label(m.px0 - 4, m.py0, format_double(m.y0), "end");
  label(m.px0 - 4, m.py1 + 10, format_double(m.y1), "end");
  label(m.px0 - 4, (m.py0 + m.py1) / 2, ylabel, "end");
  if (m.y0 < 0.0 && m.y1 > 0.0)
    os << "<line x1='" << m.px0 << "' y1='" << m.y(0.0) << "' x2='" << m.px1 << "' y2='"
       << m.y(0.0) << "' stroke='#bbb' stroke-dasharray='3,3'/>\n";
}

inline void polyline(std::ostream& os, const Mapper& m, const std::vector<Vec2>& pts,
                     const std::string& stroke, const std::string& extra = "") {
  os << "<polyline fill='none' stroke='" << stroke << "' " << extra << " points='";
  for (const Vec2& p : pts) os << m.x(p.x) << ',' << m.y(p.y) << ' ';
  os << "'/>\n";
}

}  // namespace detail

/// Stability region raster with boundary lines and gain markers. Runs of
/// equal-class cells are merged per row, so the file stays small even for
/// fine grids.
inline void write_chart_svg(std::ostream& os, const StabilityGrid& grid,
                            const std::vector<BoundaryLine>& boundaries,
                            const std::vector<GainMarker>& markers, const std::string& title) {
  const int width = 560, height = 560;
  detail::Mapper m{grid.k1_range.min, grid.k1_range.max, grid.k2_range.min, grid.k2_range.max,
                   60.0, width - 20.0, height - 40.0, 20.0};
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
     << "'>\n<title>" << title << "</title>\n";
  const double cw = (m.px1 - m.px0) / std::max(1, grid.k1_range.count - 1);
  const double ch = (m.py0 - m.py1) / std::max(1, grid.k2_range.count - 1);
  auto color = [](Stability s) {
    switch (s) {
      case Stability::stable: return "#74c69d";
      case Stability::marginal: return "#e9c46a";
      default: return "#f2f2f2";
    }
  };
  for (int i1 = 0; i1 < grid.k1_range.count; ++i1) {
    int run_start = 0;
    Stability run_class = grid.at(i1, 0);
    auto flush = [&](int end) {
      const double x = m.x(grid.k1_at(i1)) - cw / 2;
      const double ytop = m.y(grid.k2_at(end - 1)) - ch / 2;
      const double ybot = m.y(grid.k2_at(run_start)) + ch / 2;
      os << "<rect x='" << x << "' y='" << ytop << "' width='" << cw << "' height='"
         << (ybot - ytop) << "' fill='" << color(run_class) << "'/>\n";
    };
    for (int i2 = 1; i2 < grid.k2_range.count; ++i2) {
      if (grid.at(i1, i2) != run_class) {
        flush(i2);
        run_start = i2;
        run_class = grid.at(i1, i2);
      }
    }
    flush(grid.k2_range.count);
  }
  for (const BoundaryLine& l : boundaries)
    detail::polyline(os, m, l.points, "#1d3557", "stroke-dasharray='6,4' stroke-width='1.5'");
  for (const GainMarker& mk : markers)
    os << "<circle cx='" << m.x(mk.k1) << "' cy='" << m.y(mk.k2)
       << "' r='4' fill='#000'/>\n";
  detail::axes(os, m, "k1", "k2");
  os << "</svg>\n";
}

/// Lateral and yaw error of a trace over time.
inline void write_trace_svg(std::ostream& os, const Trace& trace, const std::string& title) {
  const int width = 720, height = 360;
  double lo = 0.0, hi = 0.0;
  for (const TraceSample& s : trace.samples) {
    lo = std::min({lo, s.pf.lateral_error, s.pf.yaw_error});
    hi = std::max({hi, s.pf.lateral_error, s.pf.yaw_error});
  }
  if (hi == lo) hi = lo + 1.0;
  detail::Mapper m{trace.samples.front().t, trace.samples.back().t, lo, hi,
                   60.0, width - 20.0, height - 40.0, 20.0};
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
     << "'>\n<title>" << title << "</title>\n";
  std::vector<Vec2> e_pts, th_pts;
  e_pts.reserve(trace.samples.size());
  th_pts.reserve(trace.samples.size());
  for (const TraceSample& s : trace.samples) {
    e_pts.push_back({s.t, s.pf.lateral_error});
    th_pts.push_back({s.t, s.pf.yaw_error});
  }
  detail::polyline(os, m, e_pts, "#1f78b4", "stroke-width='1.5'");
  detail::polyline(os, m, th_pts, "#e31a1c", "stroke-width='1.5'");
  os << "<text x='" << (width - 24) << "' y='30' font-size='11' text-anchor='end' "
     << "fill='#1f78b4'>e_C [m]</text>\n";
  os << "<text x='" << (width - 24) << "' y='44' font-size='11' text-anchor='end' "
     << "fill='#e31a1c'>theta_C [rad]</text>\n";
  detail::axes(os, m, "t [s]", "");
  os << "</svg>\n";
}

}  // namespace fourws::svg
