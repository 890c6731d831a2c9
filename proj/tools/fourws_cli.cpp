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

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fourws/app.hpp"
#include "fourws/errors.hpp"
#include "fourws/presets.hpp"
#include "fourws/scenario_config.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

// Scenario-config keys that may be overridden from the command line,
// mirroring the file format ("--controller.a 0.5" etc).
const std::vector<std::string> kConfigKeys = {
    "vehicle.wheelbase", "vehicle.cg_offset",
    "path.kind", "path.curvature", "path.heading", "path.origin_x", "path.origin_y",
    "path.start_x", "path.start_y", "path.start_heading",
    "run.speed", "run.dt", "run.duration", "run.frame",
    "controller.a", "controller.lambda0", "controller.k1", "controller.k2",
    "controller.feedforward",
    "initial.x", "initial.y", "initial.psi", "initial.e", "initial.theta",
};

struct CliState {
  // chart
  double a = 0.0;
  double speed = 5.0;
  double kappa = 0.0;
  double wheelbase = 2.7;
  double cg_offset = 1.35;
  std::vector<double> k1_range{-1.0, 1.0};
  std::vector<double> k2_range{-1.0, 1.0};
  int resolution = 401;
  std::vector<double> lambda0_markers;
  int threads = 1;
  bool svg = false;
  std::string out = ".";
  std::string out_base = "chart";
  std::string preset;
  // gains
  double lambda0 = -1.0;
  // simulate
  std::string config_path;
  std::vector<std::string> overrides;
  // sweep
  std::vector<double> sweep_a;
  std::vector<double> sweep_lambda0;
  bool vary_ff = false;
  std::string sweep_name = "sweep_metrics";
};

int do_chart(const CliState& st) {
  if (!st.preset.empty()) {
    fourws::app::run_chart_preset(st.preset, st.out, st.threads, st.svg);
    return 0;
  }
  fourws::app::ChartOptions opt;
  opt.a = st.a;
  opt.speed = st.speed;
  opt.curvature = st.kappa;
  opt.k1_range = {st.k1_range[0], st.k1_range[1], st.resolution};
  opt.k2_range = {st.k2_range[0], st.k2_range[1], st.resolution};
  opt.marker_lambda0s = st.lambda0_markers;
  opt.params = {st.wheelbase, st.cg_offset};
  opt.threads = st.threads;
  opt.svg = st.svg;
  opt.out_base = st.out_base;
  opt.out_dir = st.out;
  for (const auto& path : fourws::app::run_chart(opt)) std::cout << path.string() << "\n";
  return 0;
}

int do_gains(const CliState& st) {
  fourws::app::GainsOptions opt;
  opt.a = st.a;
  opt.speed = st.speed;
  opt.curvature = st.kappa;
  opt.lambda0 = st.lambda0;
  opt.params = {st.wheelbase, st.cg_offset};
  fourws::app::print_gains(std::cout, opt, fourws::app::run_gains(opt));
  return 0;
}

fourws::ScenarioConfig load_config(const CliState& st) {
  fourws::ScenarioConfig cfg = st.config_path.empty()
                                   ? fourws::ScenarioConfig{}
                                   : fourws::ScenarioConfig::parse_file(st.config_path);
  for (const std::string& kv : st.overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw fourws::ConfigError("override '" + kv + "' is not of the form key=value");
    const std::string key = kv.substr(0, eq);
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end() &&
        key.rfind("path.segment", 0) != 0 && key != "path.segments")
      throw fourws::ConfigError("unknown config key '" + key + "'");
    cfg.set(key, kv.substr(eq + 1));
  }
  return cfg;
}

int do_simulate(const CliState& st) {
  if (!st.preset.empty()) {
    const auto rows = fourws::app::run_simulate_preset(st.preset, st.out, st.svg);
    int aborted = 0;
    for (const auto& row : rows) {
      if (row.status != "ok") {
        ++aborted;
        std::cerr << st.preset << " a=" << fourws::format_double(row.a) << ": " << row.status
                  << "\n";
      }
    }
    std::cout << st.preset << ": " << (rows.size() - aborted) << "/" << rows.size()
              << " runs completed, outputs in " << st.out << "\n";
    return aborted == 0 ? 0 : kExitRuntime;
  }
  if (st.config_path.empty())
    throw fourws::ConfigError("simulate needs a config file or --preset");
  const auto row = fourws::app::run_simulate(load_config(st), "simulate", st.out, st.svg);
  if (row.status != "ok") {
    std::cerr << row.status << "\n";
    return kExitRuntime;
  }
  std::cout << "trace and metrics written to " << st.out << "\n";
  return 0;
}

int do_sweep(const CliState& st) {
  if (!st.preset.empty()) {
    for (const auto& path : fourws::app::run_sweep_preset(st.out, st.threads))
      std::cout << path.string() << "\n";
    return 0;
  }
  if (st.config_path.empty()) throw fourws::ConfigError("sweep needs a config file or --preset");
  if (st.sweep_a.empty() || st.sweep_lambda0.empty())
    throw fourws::ConfigError("sweep needs nonempty --a and --lambda0 lists");
  fourws::app::SweepVary vary;
  vary.a_values = st.sweep_a;
  vary.lambda0s = st.sweep_lambda0;
  if (st.vary_ff) vary.feedforward = {true, false};
  const auto rows = fourws::app::run_sweep(load_config(st), fourws::app::make_combos(vary),
                                           /*preset_gain_reading=*/false, st.threads);
  const auto path = fourws::app::write_sweep_csv(rows, st.sweep_name, st.out, {});
  std::cout << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"four-wheel-steering path-tracking analysis"};
  cli.require_subcommand(1);
  CliState st;

  CLI::App* chart = cli.add_subcommand("chart", "stability region of the (k1, k2) plane");
  chart->add_option("--a", st.a, "rear/front steering coupling");
  chart->add_option("--speed,-V", st.speed, "longitudinal speed [m/s]");
  chart->add_option("--kappa", st.kappa, "path curvature [1/m]");
  chart->add_option("--wheelbase", st.wheelbase, "wheelbase [m]");
  chart->add_option("--cg-offset", st.cg_offset, "rear axle to CG [m]");
  chart->add_option("--k1-range", st.k1_range, "k1 min max")->expected(2);
  chart->add_option("--k2-range", st.k2_range, "k2 min max")->expected(2);
  chart->add_option("--resolution", st.resolution, "grid nodes per axis");
  chart->add_option("--lambda0", st.lambda0_markers, "pole-placement markers to overlay");
  chart->add_option("--threads", st.threads, "worker threads");
  chart->add_flag("--svg", st.svg, "also write an SVG rendering");
  chart->add_option("--out", st.out, "output directory");
  chart->add_option("--name", st.out_base, "output file base name");
  chart->add_option("--preset", st.preset, "fig2 | fig3 | fig4");

  CLI::App* gains = cli.add_subcommand("gains", "pole-placement gain synthesis");
  gains->add_option("--a", st.a, "rear/front steering coupling");
  gains->add_option("--speed,-V", st.speed, "longitudinal speed [m/s]")->capture_default_str();
  gains->add_option("--kappa", st.kappa, "path curvature [1/m]");
  gains->add_option("--lambda0", st.lambda0, "desired double root [1/s]")->required();
  gains->add_option("--wheelbase", st.wheelbase, "wheelbase [m]");
  gains->add_option("--cg-offset", st.cg_offset, "rear axle to CG [m]");

  CLI::App* simulate = cli.add_subcommand("simulate", "closed-loop run from a scenario config");
  simulate->add_option("config", st.config_path, "scenario config file");
  simulate->add_option("--set", st.overrides, "override a config key (key=value)");
  simulate->add_option("--preset", st.preset, "fig6 | fig7 | fig8 | fig9");
  simulate->add_flag("--svg", st.svg, "also write SVG plots");
  simulate->add_option("--out", st.out, "output directory");

  CLI::App* sweep = cli.add_subcommand("sweep", "metrics over (a, lambda0) combinations");
  sweep->add_option("config", st.config_path, "base scenario config file");
  sweep->add_option("--set", st.overrides, "override a config key (key=value)");
  sweep->add_option("--a", st.sweep_a, "coupling values");
  sweep->add_option("--lambda0", st.sweep_lambda0, "double-root values");
  sweep->add_flag("--vary-ff", st.vary_ff, "run each combination with and without feedforward");
  sweep->add_option("--threads", st.threads, "worker threads");
  sweep->add_option("--out", st.out, "output directory");
  sweep->add_option("--name", st.sweep_name, "output file base name");
  sweep->add_option("--preset", st.preset, "fig5");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (chart->parsed()) return do_chart(st);
    if (gains->parsed()) return do_gains(st);
    if (simulate->parsed()) return do_simulate(st);
    if (sweep->parsed()) return do_sweep(st);
  } catch (const fourws::SimulationAbort& e) {
    std::cerr << "simulation aborted at " << e.what() << "\n";
    return kExitRuntime;
  } catch (const fourws::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fourws::PlacementError& e) {
    std::cerr << "gain synthesis error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fourws::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
