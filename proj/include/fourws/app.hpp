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
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fourws/csv.hpp"
#include "fourws/errors.hpp"
#include "fourws/presets.hpp"
#include "fourws/scenario_config.hpp"
#include "fourws/sim.hpp"
#include "fourws/stability.hpp"
#include "fourws/svg.hpp"

// Command implementations shared by the CLI and the test suites. Every
// command computes its full output in memory first and touches the
// filesystem only afterwards, so an abort never leaves partial files.

namespace fourws::app {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  os << content;
  if (!os) throw Error("write failed for '" + path.string() + "'");
}

inline std::string sanitize_csv(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// ---------------------------------------------------------------------------
// chart

struct ChartOptions {
  double a{0.0};
  double speed{5.0};
  double curvature{0.0};
  AxisRange k1_range{-1.0, 1.0, 401};
  AxisRange k2_range{-1.0, 1.0, 401};
  std::vector<double> marker_lambda0s{};
  VehicleParams params{};
  int threads{1};
  bool svg{false};
  std::string out_base{"chart"};
  std::filesystem::path out_dir{"."};
};

inline std::vector<std::filesystem::path> run_chart(const ChartOptions& opt) {
  validate(opt.params);
  const StabilityGrid grid = sample_region(opt.k1_range, opt.k2_range, opt.a, opt.speed,
                                           opt.params, opt.curvature, opt.threads);
  const std::vector<BoundaryLine> boundaries =
      boundary_curves(opt.a, opt.params, opt.curvature, opt.k1_range, opt.k2_range);
  std::vector<GainMarker> markers;
  for (double lambda0 : opt.marker_lambda0s) {
    try {
      const ControlGains g =
          place_double_pole({lambda0}, opt.a, opt.speed, opt.params, opt.curvature).gains;
      markers.push_back({lambda0, g.k1, g.k2});
    } catch (const PlacementError&) {
      // no marker on unplaceable branches (a = 1, zero curvature)
    }
  }
  const Metadata meta{{"a", format_double(opt.a)},
                      {"V", format_double(opt.speed)},
                      {"f", format_double(opt.params.wheelbase)},
                      {"d", format_double(opt.params.cg_offset)},
                      {"kappa", format_double(opt.curvature)},
                      {"resolution", std::to_string(opt.k1_range.count)}};
  std::ostringstream grid_os, boundary_os, marker_os;
  write_chart_csv(grid_os, grid, meta);
  write_boundary_csv(boundary_os, boundaries, meta);
  write_markers_csv(marker_os, markers, meta);

  std::vector<std::filesystem::path> written;
  std::filesystem::create_directories(opt.out_dir);
  const auto base = opt.out_dir / opt.out_base;
  write_file(base.string() + "_grid.csv", grid_os.str());
  written.push_back(base.string() + "_grid.csv");
  write_file(base.string() + "_boundary.csv", boundary_os.str());
  written.push_back(base.string() + "_boundary.csv");
  write_file(base.string() + "_markers.csv", marker_os.str());
  written.push_back(base.string() + "_markers.csv");
  if (opt.svg) {
    std::ostringstream svg_os;
    svg::write_chart_svg(svg_os, grid, boundaries, markers, opt.out_base);
    write_file(base.string() + ".svg", svg_os.str());
    written.push_back(base.string() + ".svg");
  }
  return written;
}

inline std::vector<std::filesystem::path> run_chart_preset(const std::string& preset,
                                                           const std::filesystem::path& out_dir,
                                                           int threads, bool svg) {
  std::vector<std::filesystem::path> written;
  for (const ChartJob& job : presets::chart_jobs(preset)) {
    ChartOptions opt;
    opt.a = job.a;
    opt.speed = job.speed;
    opt.curvature = job.curvature;
    opt.marker_lambda0s = job.marker_lambda0s;
    opt.threads = threads;
    opt.svg = svg;
    opt.out_base = job.name;
    opt.out_dir = out_dir;
    auto files = run_chart(opt);
    written.insert(written.end(), files.begin(), files.end());
  }
  return written;
}

// ---------------------------------------------------------------------------
// gains

struct GainsOptions {
  double a{0.0};
  double speed{20.0};
  double curvature{0.0};
  double lambda0{-1.0};
  VehicleParams params{};
};

struct GainsReport {
  ControlGains gains;
  std::array<std::complex<double>, 2> poles;
  double roundtrip_residual{};  // |c1 + 2 lambda0| + |c0 - lambda0^2|
  bool fallback_used{false};
};

inline GainsReport run_gains(const GainsOptions& opt) {
  validate(opt.params);
  const PlacementResult placed =
      place_double_pole({opt.lambda0}, opt.a, opt.speed, opt.params, opt.curvature);
  const CharPoly p = char_coeffs(placed.gains, opt.speed, opt.params, opt.curvature);
  GainsReport report;
  report.gains = placed.gains;
  report.poles = eigenvalues(closed_loop_matrix(placed.gains, opt.speed, opt.params, opt.curvature));
  report.roundtrip_residual = std::abs(p.c1 + 2.0 * opt.lambda0) +
                              std::abs(p.c0 - opt.lambda0 * opt.lambda0);
  report.fallback_used = placed.fallback_used;
  return report;
}

inline void print_gains(std::ostream& os, const GainsOptions& opt, const GainsReport& r) {
  auto cpx = [](const std::complex<double>& z) {
    return "(" + format_double(z.real()) + ", " + format_double(z.imag()) + ")";
  };
  os << "a       = " << format_double(opt.a) << "\n"
     << "V       = " << format_double(opt.speed) << " m/s\n"
     << "kappa   = " << format_double(opt.curvature) << " 1/m\n"
     << "lambda0 = " << format_double(opt.lambda0) << " 1/s\n"
     << "k1      = " << format_double(r.gains.k1) << "\n"
     << "k2      = " << format_double(r.gains.k2) << "\n"
     << "k3      = " << format_double(r.gains.k3()) << "\n"
     << "k4      = " << format_double(r.gains.k4()) << "\n"
     << "closed-loop eigenvalues: " << cpx(r.poles[0]) << " " << cpx(r.poles[1]) << "\n"
     << "round-trip residual |c1 + 2*lambda0| + |c0 - lambda0^2| = "
     << format_double(r.roundtrip_residual) << "\n";
  if (r.fallback_used)
    os << "note: closed-form branch failed its round-trip check; gains were\n"
          "recomputed from the defining linear system\n";
}

// ---------------------------------------------------------------------------
// simulate

inline Metadata scenario_metadata(const Scenario& sc, double a, std::optional<double> lambda0) {
  Metadata meta{{"a", format_double(a)},
                {"V", format_double(sc.speed)},
                {"f", format_double(sc.params.wheelbase)},
                {"d", format_double(sc.params.cg_offset)},
                {"kappa", format_double(sc.path.pose_at(0.0).curvature)}};
  if (lambda0) meta.push_back({"lambda0", format_double(*lambda0)});
  meta.push_back({"dt", format_double(sc.dt)});
  return meta;
}

inline MetricsRow metrics_row_for(const Scenario& sc, double a, std::optional<double> lambda0) {
  MetricsRow row;
  row.a = a;
  row.lambda0 = lambda0;
  row.feedforward = sc.controller.feedforward_enabled;
  row.k1 = sc.controller.gains.k1;
  row.k2 = sc.controller.gains.k2;
  row.speed = sc.speed;
  row.curvature = sc.path.pose_at(0.0).curvature;
  return row;
}

/// Run one scenario and write <name>_trace.csv (+ optional svg); the metrics
/// row is returned for aggregation. Aborted runs produce a flagged row and no
/// trace file.
inline MetricsRow run_simulate_job(const Scenario& sc, const std::string& name, double a,
                                   std::optional<double> lambda0,
                                   const std::filesystem::path& out_dir, bool svg) {
  MetricsRow row = metrics_row_for(sc, a, lambda0);
  Trace trace;
  try {
    trace = run(sc);
  } catch (const SimulationAbort& e) {
    row.status = "aborted: " + sanitize_csv(e.what());
    return row;
  }
  row.metrics = compute_metrics(trace, sc.speed);
  std::ostringstream trace_os;
  write_trace_csv(trace_os, trace, scenario_metadata(sc, a, lambda0));
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / (name + "_trace.csv"), trace_os.str());
  if (svg) {
    std::ostringstream svg_os;
    svg::write_trace_svg(svg_os, trace, name);
    write_file(out_dir / (name + ".svg"), svg_os.str());
  }
  return row;
}

/// `simulate` on a config file: trace.csv + metrics.csv in out_dir. Returns
/// the row so callers can inspect the status.
inline MetricsRow run_simulate(const ScenarioConfig& cfg, const std::string& name,
                               const std::filesystem::path& out_dir, bool svg) {
  const Scenario sc = cfg.build();
  std::optional<double> lambda0;
  if (const auto raw = cfg.raw("controller.lambda0")) lambda0 = parse_double(*raw);
  const MetricsRow row = run_simulate_job(sc, name, sc.controller.gains.a, lambda0, out_dir, svg);
  std::ostringstream metrics_os;
  write_metrics_csv(metrics_os, {row}, scenario_metadata(sc, sc.controller.gains.a, lambda0));
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / (name + "_metrics.csv"), metrics_os.str());
  return row;
}

/// Figures 6-9: one trace per coupling value plus a combined metrics table.
inline std::vector<MetricsRow> run_simulate_preset(const std::string& preset,
                                                   const std::filesystem::path& out_dir,
                                                   bool svg) {
  std::vector<MetricsRow> rows;
  for (const SimulateJob& job : presets::simulate_jobs(preset))
    rows.push_back(run_simulate_job(job.scenario, job.name, job.a, job.lambda0, out_dir, svg));
  std::ostringstream metrics_os;
  write_metrics_csv(metrics_os, rows, {{"preset", preset}});
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / (preset + "_metrics.csv"), metrics_os.str());
  return rows;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepVary {
  std::vector<double> a_values;
  std::vector<double> lambda0s;
  std::vector<bool> feedforward{true};
};

/// One row per (a, lambda0, feedforward) combination, in that nesting order.
/// Failed combinations are flagged and the sweep continues. Combinations are
/// independent, so they may run on several threads; the row order is fixed by
/// index, not by completion time.
inline std::vector<MetricsRow> run_sweep(const ScenarioConfig& base,
                                         const std::vector<SweepCombo>& combos,
                                         bool preset_gain_reading, int threads = 1) {
  std::vector<MetricsRow> rows(combos.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const SweepCombo& combo = combos[i];
      MetricsRow& row = rows[i];
      row.a = combo.a;
      row.lambda0 = combo.lambda0;
      row.feedforward = combo.feedforward;
      try {
        ScenarioConfig cfg = base;
        cfg.erase("controller.a");
        cfg.erase("controller.lambda0");
        cfg.erase("controller.k1");
        cfg.erase("controller.k2");
        cfg.erase("controller.feedforward");
        cfg.set("controller.a", format_double(combo.a));
        cfg.set("controller.feedforward", combo.feedforward ? "on" : "off");
        cfg.set("controller.k1", "0");  // placeholder, replaced below
        cfg.set("controller.k2", "0");
        Scenario sc = cfg.build();
        const double curvature = sc.path.pose_at(0.0).curvature;
        const ControlGains gains =
            preset_gain_reading
                ? preset_gains(combo.lambda0, combo.a, sc.speed, sc.params, curvature)
                : place_double_pole({combo.lambda0}, combo.a, sc.speed, sc.params, curvature)
                      .gains;
        sc.controller.gains = gains;
        row.k1 = gains.k1;
        row.k2 = gains.k2;
        row.speed = sc.speed;
        row.curvature = curvature;
        const Trace trace = run(sc);
        row.metrics = compute_metrics(trace, sc.speed);
      } catch (const PlacementError& e) {
        row.status = "unplaceable: " + sanitize_csv(e.what());
      } catch (const SimulationAbort& e) {
        row.status = "aborted: " + sanitize_csv(e.what());
      } catch (const Error& e) {
        row.status = "error: " + sanitize_csv(e.what());
      }
    }
  };
  if (threads <= 1) {
    work(0, combos.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (combos.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(combos.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

inline std::vector<SweepCombo> make_combos(const SweepVary& vary) {
  std::vector<SweepCombo> combos;
  for (double a : vary.a_values)
    for (double lambda0 : vary.lambda0s)
      for (bool ff : vary.feedforward) combos.push_back({a, lambda0, ff});
  return combos;
}

inline std::filesystem::path write_sweep_csv(const std::vector<MetricsRow>& rows,
                                             const std::string& name,
                                             const std::filesystem::path& out_dir,
                                             const Metadata& meta) {
  std::ostringstream os;
  write_metrics_csv(os, rows, meta);
  std::filesystem::create_directories(out_dir);
  const auto path = out_dir / (name + ".csv");
  write_file(path, os.str());
  return path;
}

/// The fig5 preset: four (road, speed) sweep panels.
inline std::vector<std::filesystem::path> run_sweep_preset(const std::filesystem::path& out_dir,
                                                           int threads) {
  std::vector<std::filesystem::path> written;
  for (const SweepPanel& panel : presets::sweep_panels()) {
    const std::vector<MetricsRow> rows = run_sweep(panel.base, panel.combos, true, threads);
    written.push_back(write_sweep_csv(rows, panel.name, out_dir,
                                      {{"preset", panel.name},
                                       {"V", format_double(panel.speed)},
                                       {"kappa", format_double(panel.curvature)}}));
  }
  return written;
}

}  // namespace fourws::app
