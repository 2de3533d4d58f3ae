/*
 * Copyright (C) 2026 The platoon_merge Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#include "platoon_merge/config.h"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "platoon_merge/errors.h"

namespace platoon_merge {
namespace {

std::string where(const YAML::Node& node, const std::string& source) {
  const auto mark = node.Mark();
  if (mark.is_null()) return source;
  return fmt::format("{}:{}", source, mark.line + 1);
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  // Visits a mapping section, rejecting keys not in `known`.
  void section(const YAML::Node& root, const std::string& name, const std::set<std::string>& known,
               const std::function<void(const YAML::Node&)>& body) const {
    const YAML::Node node = root[name];
    if (!node) return;
    if (!node.IsMap()) throw ConfigError(name, where(node, source_) + ": '" + name + "' must be a mapping");
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!known.count(key)) {
        throw ConfigError(name + "." + key, where(kv.first, source_) + ": unknown key '" + name + "." + key + "'");
      }
    }
    body(node);
  }

  template <typename T, typename K>
  void get(const YAML::Node& node, const std::string& field, const K& key, T& out) const {
    const YAML::Node v = node[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field, where(v, source_) + ": bad value for '" + field + "'");
    }
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

Road parse_road(const std::string& text, const std::string& field) {
  if (text == "main") return Road::kMain;
  if (text == "ramp") return Road::kRamp;
  throw ConfigError(field, "road must be 'main' or 'ramp', got '" + text + "'");
}

// Shortest text that reads back to the same double.
std::string num(double x) {
  for (int precision = 6; precision <= 17; ++precision) {
    std::string s = fmt::format("{:.{}g}", x, precision);
    if (std::stod(s) == x) return s;
  }
  return fmt::format("{:.17g}", x);
}

void emit_cf(std::ostringstream& out, const std::string& name, const CarFollowingParams& cf) {
  out << name << ":\n"
      << "  desired_speed: " << num(cf.desired_speed) << "\n"
      << "  max_accel: " << num(cf.max_accel) << "\n"
      << "  comfortable_decel: " << num(cf.comfortable_decel) << "\n"
      << "  desired_time_headway: " << num(cf.desired_time_headway) << "\n"
      << "  jam_distance: " << num(cf.jam_distance) << "\n"
      << "  lookahead: " << num(cf.lookahead) << "\n"
      << "  critical_gap: " << num(cf.critical_gap) << "\n"
      << "  accel_exponent: " << num(cf.accel_exponent) << "\n";
}

void read_cf(const Reader& r, const YAML::Node& root, const std::string& name, CarFollowingParams& cf) {
  r.section(root, name,
            {"desired_speed", "max_accel", "comfortable_decel", "desired_time_headway", "jam_distance",
             "lookahead", "critical_gap", "accel_exponent"},
            [&](const YAML::Node& n) {
              r.get(n, name + ".desired_speed", "desired_speed", cf.desired_speed);
              r.get(n, name + ".max_accel", "max_accel", cf.max_accel);
              r.get(n, name + ".comfortable_decel", "comfortable_decel", cf.comfortable_decel);
              r.get(n, name + ".desired_time_headway", "desired_time_headway", cf.desired_time_headway);
              r.get(n, name + ".jam_distance", "jam_distance", cf.jam_distance);
              r.get(n, name + ".lookahead", "lookahead", cf.lookahead);
              r.get(n, name + ".critical_gap", "critical_gap", cf.critical_gap);
              r.get(n, name + ".accel_exponent", "accel_exponent", cf.accel_exponent);
            });
}

}  // namespace

void SimulationConfig::validate() const {
  scenario.validate();
  human.validate(scenario.params);
  try {
    platoon_human.validate(scenario.params);
  } catch (const ConfigError& e) {
    // Field names come back under human_driver.
    const std::string what = std::string(e.what()).substr(e.field().size() + 2);
    throw ConfigError("platoon_" + e.field(), what);
  }
  fuel.validate(scenario.params);
  double last = -1.0;
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    const auto& a = arrivals[i];
    const std::string field = fmt::format("arrivals[{}]", i);
    if (a.size < 1) throw ConfigError(field + ".size", "platoon size must be at least 1");
    if (a.entry_time < last) throw ConfigError(field + ".entry_time", "arrivals must be sorted by entry time");
    if (a.entry_time < 0.0) throw ConfigError(field + ".entry_time", "entry time must be non-negative");
    last = a.entry_time;
  }
}

std::string SimulationConfig::fingerprint() const {
  // FNV-1a over the canonical rendering.
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : dump_config(*this)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

SimulationConfig parse_config(std::string_view text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", fmt::format("{}:{}: {}", source, e.mark.line + 1, e.msg));
  }
  SimulationConfig c;
  if (root.IsNull()) {
    c.validate();
    return c;
  }
  if (!root.IsMap()) throw ConfigError("", source + ": top level must be a mapping");
  const std::set<std::string> sections = {"name",    "geometry",     "vehicle",      "delay",
                                          "simulation", "traffic",   "human_driver", "platoon_human_driver",
                                          "fuel",    "arrivals"};
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!sections.count(key)) throw ConfigError(key, where(kv.first, source) + ": unknown section '" + key + "'");
  }
  const Reader r(source);
  ScenarioConfig& s = c.scenario;
  r.get(root, "name", "name", c.name);

  r.section(root, "geometry", {"main_zone_length", "ramp_zone_length", "conflict_position", "downstream_length"},
            [&](const YAML::Node& n) {
              r.get(n, "geometry.main_zone_length", "main_zone_length", s.geometry.main_zone_length);
              r.get(n, "geometry.ramp_zone_length", "ramp_zone_length", s.geometry.ramp_zone_length);
              r.get(n, "geometry.conflict_position", "conflict_position", s.geometry.conflict_position);
              r.get(n, "geometry.downstream_length", "downstream_length", s.geometry.downstream_length);
            });
  r.section(root, "vehicle",
            {"u_min", "u_max", "v_min", "v_max", "length", "standstill_distance", "reaction_time", "exit_headway"},
            [&](const YAML::Node& n) {
              auto& p = s.params;
              r.get(n, "vehicle.u_min", "u_min", p.u_min);
              r.get(n, "vehicle.u_max", "u_max", p.u_max);
              r.get(n, "vehicle.v_min", "v_min", p.v_min);
              r.get(n, "vehicle.v_max", "v_max", p.v_max);
              r.get(n, "vehicle.length", "length", p.vehicle_length);
              r.get(n, "vehicle.standstill_distance", "standstill_distance", p.standstill_distance);
              r.get(n, "vehicle.reaction_time", "reaction_time", p.reaction_time);
              r.get(n, "vehicle.exit_headway", "exit_headway", p.exit_headway);
            });
  r.section(root, "delay", {"tau_min", "tau_max"}, [&](const YAML::Node& n) {
    r.get(n, "delay.tau_min", "tau_min", s.tau_min);
    r.get(n, "delay.tau_max", "tau_max", s.tau_max);
  });
  r.section(root, "simulation", {"dt", "dt_search", "horizon", "seed"}, [&](const YAML::Node& n) {
    r.get(n, "simulation.dt", "dt", s.dt_sim);
    r.get(n, "simulation.dt_search", "dt_search", s.dt_search);
    r.get(n, "simulation.horizon", "horizon", s.horizon);
    r.get(n, "simulation.seed", "seed", s.rng_seed);
  });
  r.section(root, "traffic",
            {"main_volume", "ramp_volume", "entry_speed_min", "entry_speed_max", "platoon_gap", "headway_spread",
             "platoon_sizes"},
            [&](const YAML::Node& n) {
              r.get(n, "traffic.main_volume", "main_volume", s.main_volume);
              r.get(n, "traffic.ramp_volume", "ramp_volume", s.ramp_volume);
              r.get(n, "traffic.entry_speed_min", "entry_speed_min", s.entry_speed_min);
              r.get(n, "traffic.entry_speed_max", "entry_speed_max", s.entry_speed_max);
              r.get(n, "traffic.platoon_gap", "platoon_gap", s.delta);
              r.get(n, "traffic.headway_spread", "headway_spread", s.headway_spread);
              if (const YAML::Node sizes = n["platoon_sizes"]) {
                if (!sizes.IsSequence() || sizes.size() == 0) {
                  throw ConfigError("traffic.platoon_sizes",
                                    where(sizes, source) + ": platoon_sizes must be a non-empty list");
                }
                s.platoon_sizes.clear();
                for (std::size_t i = 0; i < sizes.size(); ++i) {
                  const std::string f = fmt::format("traffic.platoon_sizes[{}]", i);
                  PlatoonSizeChoice choice;
                  if (!sizes[i].IsMap()) throw ConfigError(f, where(sizes[i], source) + ": expected {size, probability}");
                  r.get(sizes[i], f + ".size", "size", choice.size);
                  r.get(sizes[i], f + ".probability", "probability", choice.probability);
                  s.platoon_sizes.push_back(choice);
                }
              }
            });
  read_cf(r, root, "human_driver", c.human);
  read_cf(r, root, "platoon_human_driver", c.platoon_human);
  r.section(root, "fuel", {"cruise", "accel"}, [&](const YAML::Node& n) {
    auto read_poly = [&](const char* key, auto& poly) {
      const YAML::Node v = n[key];
      if (!v) return;
      const std::string field = std::string("fuel.") + key;
      if (!v.IsSequence() || v.size() != poly.size()) {
        throw ConfigError(field, where(v, source) + fmt::format(": '{}' needs {} coefficients", field, poly.size()));
      }
      for (std::size_t i = 0; i < poly.size(); ++i) r.get(v, field, static_cast<int>(i), poly[i]);
    };
    read_poly("cruise", c.fuel.cruise_poly);
    read_poly("accel", c.fuel.accel_poly);
  });
  if (const YAML::Node arr = root["arrivals"]) {
    if (!arr.IsSequence()) throw ConfigError("arrivals", where(arr, source) + ": arrivals must be a list");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string f = fmt::format("arrivals[{}]", i);
      const YAML::Node a = arr[i];
      if (!a.IsMap()) throw ConfigError(f, where(a, source) + ": expected {road, entry_time, entry_speed, size}");
      for (const auto& kv : a) {
        const auto key = kv.first.as<std::string>();
        if (key != "road" && key != "entry_time" && key != "entry_speed" && key != "size") {
          throw ConfigError(f + "." + key, where(kv.first, source) + ": unknown key '" + key + "'");
        }
      }
      ArrivalEvent e;
      std::string road = "main";
      r.get(a, f + ".road", "road", road);
      e.road = parse_road(road, f + ".road");
      r.get(a, f + ".entry_time", "entry_time", e.entry_time);
      r.get(a, f + ".entry_speed", "entry_speed", e.entry_speed);
      r.get(a, f + ".size", "size", e.size);
      c.arrivals.push_back(e);
    }
  }
  c.validate();
  return c;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config_path", "cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::string dump_config(const SimulationConfig& c) {
  const ScenarioConfig& s = c.scenario;
  const VehicleParams& p = s.params;
  std::ostringstream out;
  out << "name: " << c.name << "\n"
      << "geometry:\n"
      << "  main_zone_length: " << num(s.geometry.main_zone_length) << "\n"
      << "  ramp_zone_length: " << num(s.geometry.ramp_zone_length) << "\n"
      << "  conflict_position: " << num(s.geometry.conflict_position) << "\n"
      << "  downstream_length: " << num(s.geometry.downstream_length) << "\n"
      << "vehicle:\n"
      << "  u_min: " << num(p.u_min) << "\n"
      << "  u_max: " << num(p.u_max) << "\n"
      << "  v_min: " << num(p.v_min) << "\n"
      << "  v_max: " << num(p.v_max) << "\n"
      << "  length: " << num(p.vehicle_length) << "\n"
      << "  standstill_distance: " << num(p.standstill_distance) << "\n"
      << "  reaction_time: " << num(p.reaction_time) << "\n"
      << "  exit_headway: " << num(p.exit_headway) << "\n"
      << "delay:\n"
      << "  tau_min: " << num(s.tau_min) << "\n"
      << "  tau_max: " << num(s.tau_max) << "\n"
      << "simulation:\n"
      << "  dt: " << num(s.dt_sim) << "\n"
      << "  dt_search: " << num(s.dt_search) << "\n"
      << "  horizon: " << num(s.horizon) << "\n"
      << "  seed: " << s.rng_seed << "\n"
      << "traffic:\n"
      << "  main_volume: " << num(s.main_volume) << "\n"
      << "  ramp_volume: " << num(s.ramp_volume) << "\n"
      << "  entry_speed_min: " << num(s.entry_speed_min) << "\n"
      << "  entry_speed_max: " << num(s.entry_speed_max) << "\n"
      << "  platoon_gap: " << num(s.delta) << "\n"
      << "  headway_spread: " << num(s.headway_spread) << "\n"
      << "  platoon_sizes:\n";
  for (const auto& choice : s.platoon_sizes) {
    out << "    - {size: " << choice.size << ", probability: " << num(choice.probability) << "}\n";
  }
  emit_cf(out, "human_driver", c.human);
  emit_cf(out, "platoon_human_driver", c.platoon_human);
  out << "fuel:\n  cruise: [";
  for (std::size_t i = 0; i < c.fuel.cruise_poly.size(); ++i) out << (i ? ", " : "") << num(c.fuel.cruise_poly[i]);
  out << "]\n  accel: [";
  for (std::size_t i = 0; i < c.fuel.accel_poly.size(); ++i) out << (i ? ", " : "") << num(c.fuel.accel_poly[i]);
  out << "]\n";
  if (!c.arrivals.empty()) {
    out << "arrivals:\n";
    for (const auto& a : c.arrivals) {
      out << "  - {road: " << to_string(a.road) << ", entry_time: " << num(a.entry_time)
          << ", entry_speed: " << num(a.entry_speed) << ", size: " << a.size << "}\n";
    }
  }
  return out.str();
}

}  // namespace platoon_merge
