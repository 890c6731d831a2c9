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

#include <optional>
#include <string>
#include <vector>

#include "fourws/csv.hpp"
#include "fourws/errors.hpp"
#include "fourws/scenario_config.hpp"
#include "fourws/stability.hpp"

namespace fourws {

/// Crab-coupled gains on a straight path (a = 1): the yaw channel is inert
/// (delta_f = delta_r implies psi_dot = 0), so only the lateral gain matters.
/// k1 is matched on the linear coefficient of the desired (lambda-lambda0)^2
/// polynomial, k1 = -2*lambda0/speed; k2 is free and set to 0.
inline ControlGains crab_line_gains(double lambda0, double speed) {
  return {-2.0 * lambda0 / speed, 0.0, 1.0};
}

/// Pole placement as used by the bundled presets: the regular placement
/// everywhere it exists, the crab-line reading for a = 1 on straight paths.
inline ControlGains preset_gains(double lambda0, double a, double speed,
                                 const VehicleParams& params, double curvature) {
  if (curvature == 0.0 && a == 1.0) return crab_line_gains(lambda0, speed);
  return place_double_pole({lambda0}, a, speed, params, curvature).gains;
}

struct ChartJob {
  std::string name;  // output file base
  double a{};
  double speed{};
  double curvature{};
  std::vector<double> marker_lambda0s;
};

struct SimulateJob {
  std::string name;
  Scenario scenario;
  double a{};
  std::optional<double> lambda0{};
};

struct SweepCombo {
  double a{};
  double lambda0{};
  bool feedforward{true};
};

struct SweepPanel {
  std::string name;
  ScenarioConfig base;
  double speed{};
  double curvature{};
  std::vector<SweepCombo> combos;
};

namespace presets {

inline const std::vector<std::string>& chart_names() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4"};
  return names;
}

inline const std::vector<std::string>& simulate_names() {
  static const std::vector<std::string> names{"fig6", "fig7", "fig8", "fig9"};
  return names;
}

inline std::vector<ChartJob> chart_jobs(const std::string& preset) {
  std::vector<ChartJob> jobs;
  auto add = [&jobs](const std::string& base, double a, double speed, double curvature) {
    std::string name = base + "_a" + format_double(a);
    if (curvature != 0.0) name += "_kappa" + format_double(curvature);
    jobs.push_back({name, a, speed, curvature, {-1.0}});
  };
  if (preset == "fig2") {
    for (double a : {-1.5, -1.0, -0.5, 0.0}) add("fig2a", a, 5.0, 0.0);
    for (double a : {-1.5, -1.0, -0.5}) add("fig2b", a, 20.0, 0.0);
    for (double a : {0.0, 0.5, 1.0, 1.5}) add("fig2c", a, 20.0, 0.0);
    return jobs;
  }
  if (preset == "fig3" || preset == "fig4") {
    const double speed = (preset == "fig3") ? 5.0 : 20.0;
    for (double a : {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5})
      for (double curvature : {0.0, 0.01, 0.1}) add(preset, a, speed, curvature);
    return jobs;
  }
  throw ConfigError("unknown chart preset '" + preset + "'");
}

inline ScenarioConfig simulate_base(const std::string& preset) {
  ScenarioConfig cfg;
  if (preset == "fig6" || preset == "fig8") {
    cfg.set("path.kind", "straight");
    cfg.set("initial.y", "2");
  } else if (preset == "fig7") {
    cfg.set("path.kind", "arc");
    cfg.set("path.curvature", "0.1");
    cfg.set("initial.e", "-5");
  } else if (preset == "fig9") {
    cfg.set("path.kind", "arc");
    cfg.set("path.curvature", "0.01");
    cfg.set("initial.e", "-10");
  } else {
    throw ConfigError("unknown simulate preset '" + preset + "'");
  }
  const bool high_speed = (preset == "fig8" || preset == "fig9");
  cfg.set("run.speed", high_speed ? "20" : "5");
  cfg.set("run.duration", high_speed ? "20" : "30");
  cfg.set("controller.feedforward", "on");
  return cfg;
}

/// The per-coupling runs of the fig6-fig9 presets: lambda0 = -1.
inline std::vector<SimulateJob> simulate_jobs(const std::string& preset) {
  const double lambda0 = -1.0;
  std::vector<SimulateJob> jobs;
  const bool straight = (preset == "fig6" || preset == "fig8");
  for (double a : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    ScenarioConfig cfg = simulate_base(preset);
    cfg.set("controller.a", format_double(a));
    if (straight && a == 1.0) {
      const double speed = (preset == "fig8") ? 20.0 : 5.0;
      const ControlGains g = crab_line_gains(lambda0, speed);
      cfg.set("controller.k1", format_double(g.k1));
      cfg.set("controller.k2", format_double(g.k2));
    } else {
      cfg.set("controller.lambda0", format_double(lambda0));
    }
    jobs.push_back({preset + "_a" + format_double(a), cfg.build(), a, lambda0});
  }
  return jobs;
}

/// The four max-lateral-acceleration sweep panels of the fig5 preset.
inline std::vector<SweepPanel> sweep_panels() {
  std::vector<SweepPanel> panels;
  auto combos = [](std::vector<double> lambda0s) {
    std::vector<SweepCombo> out;
    for (double a : {-1.0, -0.5, 0.0, 0.5, 1.0})
      for (double lambda0 : lambda0s) out.push_back({a, lambda0, true});
    return out;
  };
  {
    ScenarioConfig cfg = simulate_base("fig6");
    panels.push_back({"fig5_straight_v5", cfg, 5.0, 0.0, combos({-1.0, -2.0})});
  }
  {
    ScenarioConfig cfg = simulate_base("fig7");
    panels.push_back({"fig5_curved_v5", cfg, 5.0, 0.1, combos({-1.0, -2.0})});
  }
  {
    ScenarioConfig cfg = simulate_base("fig8");
    panels.push_back({"fig5_straight_v20", cfg, 20.0, 0.0, combos({-1.0, -2.0, -3.0})});
  }
  {
    ScenarioConfig cfg = simulate_base("fig9");
    panels.push_back({"fig5_curved_v20", cfg, 20.0, 0.01, combos({-1.0, -2.0, -3.0})});
  }
  return panels;
}

}  // namespace presets
}  // namespace fourws
