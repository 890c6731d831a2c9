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
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fourws/controller.hpp"
#include "fourws/errors.hpp"
#include "fourws/path.hpp"
#include "fourws/sim.hpp"
#include "fourws/stability.hpp"

namespace fourws {

/// Flat `key = value` scenario description. Lines starting with '#' are
/// comments; keys are dotted lowercase; unknown or duplicate keys are
/// rejected with their line number.
///
/// Keys:
///   vehicle.wheelbase, vehicle.cg_offset
///   path.kind (straight | arc | piecewise)
///     straight: path.heading, path.origin_x, path.origin_y
///     arc:      path.curvature (signed, left positive),
///               path.start_x, path.start_y, path.start_heading
///     piecewise: path.segments = N, then per i in [0, N):
///               path.segment.i.kind (straight | arc),
///               path.segment.i.length,
///               path.segment.i.curvature (arc only);
///               the chain starts at path.start_* and joins continuously
///   run.speed, run.dt, run.duration, run.frame (global | path)
///   controller.a, controller.feedforward (on | off),
///   controller.lambda0 XOR (controller.k1 and controller.k2)
///   initial.x, initial.y, initial.psi XOR initial.e, initial.theta
class ScenarioConfig {
 public:
  struct Entry {
    std::string value;
    int line{};
    mutable bool used{false};
  };

  static ScenarioConfig parse(std::istream& is) {
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const std::size_t eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty() || value.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
      if (cfg.entries_.count(key))
        throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
      cfg.entries_[key] = Entry{value, lineno};
    }
    return cfg;
  }

  static ScenarioConfig parse_string(const std::string& text) {
    std::istringstream is(text);
    return parse(is);
  }

  static ScenarioConfig parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file '" + path + "'");
    return parse(is);
  }

  void set(const std::string& key, const std::string& value) { entries_[key] = Entry{value, 0}; }

  void erase(const std::string& key) { entries_.erase(key); }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  /// Raw value of a key without marking it consumed.
  std::optional<std::string> raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
  }

  /// Build and validate the scenario; every key must be consumed.
  Scenario build() const {
    for (auto& [key, entry] : entries_) entry.used = false;
    Scenario sc;
    sc.params.wheelbase = number_or("vehicle.wheelbase", 2.7);
    sc.params.cg_offset = number_or("vehicle.cg_offset", 1.35);
    try {
      validate(sc.params);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }

    sc.path = build_path();
    sc.speed = number_or("run.speed", 5.0);
    sc.dt = number_or("run.dt", 1e-3);
    sc.duration = number_or("run.duration", 30.0);
    const std::string frame = string_or("run.frame", "global");
    if (frame == "global") {
      sc.frame = Frame::global;
    } else if (frame == "path") {
      sc.frame = Frame::path;
    } else {
      throw ConfigError(context("run.frame") + ": expected 'global' or 'path'");
    }

    sc.controller = build_controller(sc);
    sc.initial = build_initial(sc);

    for (const auto& [key, entry] : entries_) {
      if (!entry.used)
        throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
    try {
      validate(sc);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    return sc;
  }

 private:
  static std::string trim(const std::string& s) {
    const std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::string context(const std::string& key) const {
    const auto it = entries_.find(key);
    const int line = (it != entries_.end()) ? it->second.line : 0;
    return "line " + std::to_string(line) + ", key '" + key + "'";
  }

  std::optional<std::string> string_opt(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    it->second.used = true;
    return it->second.value;
  }

  std::string string_or(const std::string& key, const std::string& fallback) const {
    return string_opt(key).value_or(fallback);
  }

  std::optional<double> number_opt(const std::string& key) const {
    const auto s = string_opt(key);
    if (!s) return std::nullopt;
    double v{};
    const char* begin = s->data();
    const char* end = begin + s->size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
      throw ConfigError(context(key) + ": '" + *s + "' is not a number");
    return v;
  }

  double number_or(const std::string& key, double fallback) const {
    return number_opt(key).value_or(fallback);
  }

  double number_required(const std::string& key) const {
    const auto v = number_opt(key);
    if (!v) throw ConfigError("missing required key '" + key + "'");
    return *v;
  }

  bool flag_or(const std::string& key, bool fallback) const {
    const auto s = string_opt(key);
    if (!s) return fallback;
    if (*s == "on" || *s == "true" || *s == "1") return true;
    if (*s == "off" || *s == "false" || *s == "0") return false;
    throw ConfigError(context(key) + ": expected on/off");
  }

  ReferencePath build_path() const {
    const std::string kind = string_or("path.kind", "straight");
    const Vec2 start{number_or("path.start_x", 0.0), number_or("path.start_y", 0.0)};
    const double start_heading = number_or("path.start_heading", 0.0);
    if (kind == "straight") {
      const Vec2 origin{number_or("path.origin_x", start.x), number_or("path.origin_y", start.y)};
      return ReferencePath::straight(origin, number_or("path.heading", start_heading));
    }
    if (kind == "arc") {
      const double curvature = number_required("path.curvature");
      if (curvature == 0.0)
        throw ConfigError(context("path.curvature") + ": arc curvature must be nonzero");
      return ReferencePath::arc_from_start(start, start_heading, curvature);
    }
    if (kind == "piecewise") {
      const int n = static_cast<int>(number_required("path.segments"));
      if (n < 1) throw ConfigError(context("path.segments") + ": need at least one segment");
      std::vector<PiecewiseSegment> segments;
      Vec2 at = start;
      double heading = start_heading;
      for (int i = 0; i < n; ++i) {
        const std::string prefix = "path.segment." + std::to_string(i) + ".";
        const auto seg_kind = string_opt(prefix + "kind");
        if (!seg_kind) throw ConfigError("missing required key '" + prefix + "kind'");
        const double length = number_required(prefix + "length");
        SegmentShape shape;
        if (*seg_kind == "straight") {
          shape = StraightSegment{at, heading};
        } else if (*seg_kind == "arc") {
          const double curvature = number_required(prefix + "curvature");
          if (curvature == 0.0)
            throw ConfigError(context(prefix + "curvature") + ": arc curvature must be nonzero");
          const double radius = 1.0 / std::abs(curvature);
          const Vec2 nvec{-std::sin(heading), std::cos(heading)};
          const Vec2 center = at + (1.0 / curvature) * nvec;
          shape = ArcSegment{center, radius, std::atan2(at.y - center.y, at.x - center.x),
                             curvature > 0.0};
        } else {
          throw ConfigError(context(prefix + "kind") + ": expected 'straight' or 'arc'");
        }
        segments.push_back({shape, length});
        const PathPoint end = pose_on(shape, length);
        at = {end.x, end.y};
        heading = end.heading;
      }
      return ReferencePath::piecewise(std::move(segments));
    }
    throw ConfigError(context("path.kind") + ": expected straight, arc or piecewise");
  }

  ControllerConfig build_controller(const Scenario& sc) const {
    ControllerConfig ctl;
    ctl.feedforward_enabled = flag_or("controller.feedforward", true);
    const double a = number_or("controller.a", 0.0);
    const auto lambda0 = number_opt("controller.lambda0");
    const auto k1 = number_opt("controller.k1");
    const auto k2 = number_opt("controller.k2");
    if (lambda0 && (k1 || k2))
      throw ConfigError("controller.lambda0 and controller.k1/k2 are mutually exclusive");
    if (lambda0) {
      const double curvature = sc.path.pose_at(0.0).curvature;
      ctl.gains = place_double_pole({*lambda0}, a, sc.speed, sc.params, curvature).gains;
    } else if (k1 && k2) {
      ctl.gains = {*k1, *k2, a};
    } else {
      throw ConfigError("controller needs either lambda0 or both k1 and k2");
    }
    return ctl;
  }

  GlobalState build_initial(const Scenario& sc) const {
    const auto x = number_opt("initial.x");
    const auto y = number_opt("initial.y");
    const auto psi = number_opt("initial.psi");
    const auto e = number_opt("initial.e");
    const auto theta = number_opt("initial.theta");
    const bool global_form = x || y || psi;
    const bool path_form = e || theta;
    if (global_form && path_form)
      throw ConfigError("initial.x/y/psi and initial.e/theta are mutually exclusive");
    if (path_form) {
      // place the vehicle at arclength 0 with the requested offsets
      const PathPoint p0 = sc.path.pose_at(0.0);
      const double ev = e.value_or(0.0);
      const double th = theta.value_or(0.0);
      return {p0.x - ev * std::sin(p0.heading), p0.y + ev * std::cos(p0.heading),
              p0.heading + th};
    }
    return {x.value_or(0.0), y.value_or(0.0), psi.value_or(0.0)};
  }

  std::map<std::string, Entry> entries_;
};

}  // namespace fourws
