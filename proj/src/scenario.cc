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

#include "platoon_merge/scenario.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "platoon_merge/errors.h"

namespace platoon_merge {
namespace {

constexpr double kTimeSlack = 1e-9;

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ConfigError(field, what);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double snap_up(double t, double dt) { return std::ceil(t / dt - kTimeSlack) * dt; }

}  // namespace

void RoadGeometry::validate() const {
  require(main_zone_length > 0.0, "geometry.main_zone_length", "must be positive");
  require(ramp_zone_length > 0.0, "geometry.ramp_zone_length", "must be positive");
  require(conflict_position > 0.0, "geometry.conflict_position", "must be positive");
  require(main_zone_length == conflict_position && ramp_zone_length == conflict_position,
          "geometry.conflict_position", "must equal the zone length of both roads");
  require(downstream_length > 0.0, "geometry.downstream_length", "must be positive");
}

void VehicleParams::validate() const {
  require(u_min < 0.0 && u_max > 0.0, "vehicle.u_min", "need u_min < 0 < u_max");
  require(v_min > 0.0 && v_min < v_max, "vehicle.v_min", "need 0 < v_min < v_max");
  require(vehicle_length > 0.0, "vehicle.length", "must be positive");
  require(standstill_distance > 0.0, "vehicle.standstill_distance", "must be positive");
  require(reaction_time > 0.0, "vehicle.reaction_time", "must be positive");
  require(exit_headway > 0.0, "vehicle.exit_headway", "must be positive");
}

double ScenarioConfig::mean_platoon_size() const {
  double mean = 0.0;
  for (const auto& c : platoon_sizes) mean += c.size * c.probability;
  return mean;
}

void ScenarioConfig::validate() const {
  geometry.validate();
  params.validate();
  require(tau_min >= 0.0 && tau_min <= tau_max, "delay.tau_min", "need 0 <= tau_min <= tau_max");
  require(dt_sim > 0.0, "simulation.dt", "must be positive");
  require(dt_search > 0.0, "simulation.dt_search", "must be positive");
  const double tau_steps = tau_max / dt_sim;
  require(std::abs(tau_steps - std::round(tau_steps)) < 1e-6, "delay.tau_max",
          "must be an integer multiple of dt_sim");
  require(main_volume >= 0.0, "traffic.main_volume", "must be non-negative");
  require(ramp_volume >= 0.0, "traffic.ramp_volume", "must be non-negative");
  require(!platoon_sizes.empty(), "traffic.platoon_sizes", "must not be empty");
  double total = 0.0;
  for (const auto& c : platoon_sizes) {
    require(c.size >= 1, "traffic.platoon_sizes", "sizes must be at least 1");
    require(c.probability >= 0.0, "traffic.platoon_sizes", "probabilities must be non-negative");
    total += c.probability;
  }
  require(std::abs(total - 1.0) < 1e-6, "traffic.platoon_sizes", "probabilities must sum to 1");
  require(entry_speed_min <= entry_speed_max, "traffic.entry_speed_min",
          "must not exceed entry_speed_max");
  require(entry_speed_min >= params.v_min && entry_speed_max <= params.v_max,
          "traffic.entry_speed_min", "entry speeds must lie within [v_min, v_max]");
  require(delta > 0.0, "traffic.platoon_gap", "must be positive");
  require(horizon >= 0.0, "simulation.horizon", "must be non-negative");
  require(headway_spread >= 0.0 && headway_spread < 1.0, "traffic.headway_spread",
          "must lie in [0, 1)");
}

double entry_spacing_floor(const ScenarioConfig& config, int predecessor_size, double entry_speed) {
  const VehicleParams& prm = config.params;
  // Tail of the predecessor starts platoon_length behind the entry and moves
  // at least at v_min; the newcomer cruises at entry_speed for tau_max.
  const double rear_end = (prm.safe_distance(entry_speed) + config.platoon_length(predecessor_size) +
                           (entry_speed - prm.v_min) * config.tau_max) /
                          prm.v_min;
  return std::max(config.tau_max, rear_end);
}

namespace {

struct RoadStream {
  Road road;
  double volume;
  std::mt19937_64 rng;
  double next_raw = 0.0;
  std::optional<ArrivalEvent> last;
  bool active = true;
};

int sample_size(const ScenarioConfig& config, std::mt19937_64& rng) {
  const double x = uniform01(rng);
  double cumulative = 0.0;
  for (const auto& c : config.platoon_sizes) {
    cumulative += c.probability;
    if (x < cumulative) return c.size;
  }
  return config.platoon_sizes.back().size;
}

}  // namespace

std::vector<ArrivalEvent> generate_arrivals(const ScenarioConfig& config) {
  if (config.horizon <= 0.0) return {};
  config.validate();

  const double mean_size = config.mean_platoon_size();
  int max_size = 1;
  for (const auto& c : config.platoon_sizes) {
    if (c.probability > 0.0) max_size = std::max(max_size, c.size);
  }

  std::vector<RoadStream> streams;
  for (Road road : {Road::kMain, Road::kRamp}) {
    const double volume = road == Road::kMain ? config.main_volume : config.ramp_volume;
    std::seed_seq seq{config.rng_seed, static_cast<std::uint64_t>(road == Road::kMain ? 1 : 2)};
    RoadStream s{road, volume, std::mt19937_64(seq), 0.0, std::nullopt, true};
    if (volume <= 0.0) {
      s.active = false;
      streams.push_back(std::move(s));
      continue;
    }
    const double mean_headway = 3600.0 * mean_size / volume;
    const double worst_floor = entry_spacing_floor(config, max_size, config.entry_speed_max);
    if (mean_headway < worst_floor) {
      const bool delay_binds = config.tau_max >= worst_floor;
      std::ostringstream msg;
      msg << to_string(road) << " volume " << volume << " veh/h needs a mean platoon headway of "
          << mean_headway << " s, below the entry spacing floor of " << worst_floor << " s ("
          << (delay_binds ? "delay spacing tau_max" : "rear-end entry spacing") << ")";
      throw InfeasibleConfigError(delay_binds ? "delay_spacing" : "rear_end_entry_spacing", msg.str());
    }
    s.next_raw = uniform01(s.rng) * mean_headway;
    streams.push_back(std::move(s));
  }

  std::vector<ArrivalEvent> events;
  std::optional<double> last_any;
  while (true) {
    RoadStream* pick = nullptr;
    for (auto& s : streams) {
      if (!s.active) continue;
      if (pick == nullptr || s.next_raw < pick->next_raw) pick = &s;
    }
    if (pick == nullptr) break;

    ArrivalEvent ev;
    ev.road = pick->road;
    ev.size = sample_size(config, pick->rng);
    ev.entry_speed = config.entry_speed_min +
                     (config.entry_speed_max - config.entry_speed_min) * uniform01(pick->rng);
    double t = pick->next_raw;
    if (pick->last) {
      t = std::max(t, pick->last->entry_time +
                          entry_spacing_floor(config, pick->last->size, ev.entry_speed));
    }
    if (last_any) t = std::max(t, *last_any + config.tau_max);
    ev.entry_time = snap_up(t, config.dt_sim);
    if (ev.entry_time >= config.horizon) {
      pick->active = false;
      continue;
    }

    const double mean_headway = 3600.0 * mean_size / pick->volume;
    const double gap = mean_headway * (1.0 + config.headway_spread * (2.0 * uniform01(pick->rng) - 1.0));
    pick->next_raw = ev.entry_time + gap;
    pick->last = ev;
    last_any = ev.entry_time;
    events.push_back(ev);
  }
  return events;
}

bool validate_entry_feasibility(const ArrivalEvent& event,
                                std::span<const TraceRecord> predecessor_last_follower,
                                const VehicleParams& params) {
  if (event.entry_speed < params.v_min || event.entry_speed > params.v_max) return false;
  if (predecessor_last_follower.empty()) return true;

  const auto& s = predecessor_last_follower;
  double position = 0.0;
  if (event.entry_time <= s.front().t) {
    position = s.front().p + s.front().v * (event.entry_time - s.front().t);
  } else if (event.entry_time >= s.back().t) {
    position = s.back().p + s.back().v * (event.entry_time - s.back().t);
  } else {
    auto hi = std::lower_bound(s.begin(), s.end(), event.entry_time,
                               [](const TraceRecord& r, double t) { return r.t < t; });
    auto lo = hi - 1;
    const double w = (event.entry_time - lo->t) / (hi->t - lo->t);
    position = lo->p + w * (hi->p - lo->p);
  }
  // The entering leader sits at the zone entry, position 0.
  return position - 0.0 >= params.safe_distance(event.entry_speed) - 1e-12;
}

}  // namespace platoon_merge
