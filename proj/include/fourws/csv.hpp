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

#include <charconv>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "fourws/errors.hpp"
#include "fourws/sim.hpp"
#include "fourws/stability.hpp"

namespace fourws {

/// Shortest decimal representation that parses back to the identical double.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw Error("not a number: '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

using Metadata = std::vector<std::pair<std::string, std::string>>;

inline void write_metadata(std::ostream& os, const Metadata& meta) {
  for (const auto& [key, value] : meta) os << "# " << key << " = " << value << "\n";
}

inline constexpr const char* kTraceHeader =
    "t,x_R,y_R,psi,s_C,e_C,theta_C,kappa_C,delta_f,delta_r,psi_dot,psi_ddot,delta_r_dot,a_lat";

inline void write_trace_csv(std::ostream& os, const Trace& trace, const Metadata& meta) {
  write_metadata(os, meta);
  os << kTraceHeader << "\n";
  for (const TraceSample& s : trace.samples) {
    os << format_double(s.t) << ',' << format_double(s.global.x) << ','
       << format_double(s.global.y) << ',' << format_double(s.global.psi) << ','
       << format_double(s.pf.s) << ',' << format_double(s.pf.lateral_error) << ','
       << format_double(s.pf.yaw_error) << ',' << format_double(s.curvature) << ','
       << format_double(s.input.front) << ',' << format_double(s.input.rear) << ','
       << format_double(s.psi_dot) << ',' << format_double(s.psi_ddot) << ','
       << format_double(s.delta_r_dot) << ',' << format_double(s.lat_accel) << "\n";
  }
}

/// Parse a trace CSV produced by write_trace_csv (metadata lines skipped).
inline Trace parse_trace_csv(std::istream& is) {
  Trace trace;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kTraceHeader) throw Error("trace csv: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() != 14) throw Error("trace csv: expected 14 fields");
    TraceSample s;
    s.t = parse_double(f[0]);
    s.global = {parse_double(f[1]), parse_double(f[2]), parse_double(f[3])};
    s.pf = {parse_double(f[4]), parse_double(f[5]), parse_double(f[6])};
    s.curvature = parse_double(f[7]);
    s.input = {parse_double(f[8]), parse_double(f[9])};
    s.psi_dot = parse_double(f[10]);
    s.psi_ddot = parse_double(f[11]);
    s.delta_r_dot = parse_double(f[12]);
    s.lat_accel = parse_double(f[13]);
    trace.samples.push_back(s);
  }
  if (!header_seen) throw Error("trace csv: missing header");
  return trace;
}

/// One row of a metrics table; descriptor fields identify the run, `status`
/// is "ok" or the abort reason, metric fields stay empty when the run failed
/// or the metric is undefined for the maneuver.
struct MetricsRow {
  double a{};
  std::optional<double> lambda0{};
  bool feedforward{true};
  double k1{};
  double k2{};
  double speed{};
  double curvature{};
  std::string status{"ok"};
  std::optional<Metrics> metrics{};
};

inline constexpr const char* kMetricsHeader =
    "a,lambda0,feedforward,k1,k2,speed,kappa,status,max_abs_lat_accel,max_abs_lat_error,"
    "steady_state_error,settle_time_5cm,turning_radius";

inline void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows,
                              const Metadata& meta) {
  write_metadata(os, meta);
  os << kMetricsHeader << "\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const MetricsRow& r : rows) {
    os << format_double(r.a) << ',' << opt(r.lambda0) << ',' << (r.feedforward ? "on" : "off")
       << ',' << format_double(r.k1) << ',' << format_double(r.k2) << ','
       << format_double(r.speed) << ',' << format_double(r.curvature) << ',' << r.status << ',';
    if (r.metrics) {
      os << format_double(r.metrics->max_abs_lat_accel) << ','
         << format_double(r.metrics->max_abs_lat_error) << ','
         << format_double(r.metrics->steady_state_error) << ',' << opt(r.metrics->settle_time)
         << ',' << opt(r.metrics->turning_radius);
    } else {
      os << ",,,,";
    }
    os << "\n";
  }
}

inline void write_chart_csv(std::ostream& os, const StabilityGrid& grid, const Metadata& meta) {
  write_metadata(os, meta);
  os << "k1,k2,class\n";
  for (int i1 = 0; i1 < grid.k1_range.count; ++i1) {
    const std::string k1 = format_double(grid.k1_at(i1));
    for (int i2 = 0; i2 < grid.k2_range.count; ++i2) {
      os << k1 << ',' << format_double(grid.k2_at(i2)) << ','
         << static_cast<int>(grid.at(i1, i2)) << "\n";
    }
  }
}

inline void write_boundary_csv(std::ostream& os, const std::vector<BoundaryLine>& lines,
                               const Metadata& meta) {
  write_metadata(os, meta);
  os << "curve_id,k1,k2\n";
  for (const BoundaryLine& l : lines)
    for (const Vec2& p : l.points)
      os << l.id << ',' << format_double(p.x) << ',' << format_double(p.y) << "\n";
}

struct GainMarker {
  double lambda0{};
  double k1{};
  double k2{};
};

inline void write_markers_csv(std::ostream& os, const std::vector<GainMarker>& markers,
                              const Metadata& meta) {
  write_metadata(os, meta);
  os << "lambda0,k1,k2\n";
  for (const GainMarker& m : markers)
    os << format_double(m.lambda0) << ',' << format_double(m.k1) << ',' << format_double(m.k2)
       << "\n";
}

}  // namespace fourws
