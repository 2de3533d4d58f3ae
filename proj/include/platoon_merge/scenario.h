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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "platoon_merge/road.h"
#include "platoon_merge/trace.h"

namespace platoon_merge {

// Single-lane main road and on-ramp. Positions are measured along each road
// from the control-zone entry; the conflict point sits at the zone exit of both.
struct RoadGeometry {
  double main_zone_length = 560.0;
  double ramp_zone_length = 560.0;
  double conflict_position = 560.0;
  // Merged single lane simulated past the conflict point before vehicles leave.
  double downstream_length = 200.0;

  double zone_length(Road r) const { return r == Road::kMain ? main_zone_length : ramp_zone_length; }
  void validate() const;
};

struct VehicleParams {
  double u_min = -3.0;
  double u_max = 3.0;
  double v_min = 5.0;
  double v_max = 16.67;
  double vehicle_length = 5.0;
  double standstill_distance = 3.0;  // gamma
  double reaction_time = 0.5;        // phi
  double exit_headway = 1.5;         // t_h

  // Speed-dependent rear-end distance gamma + phi * v.
  double safe_distance(double v) const { return standstill_distance + reaction_time * v; }
  void validate() const;
};

struct PlatoonSizeChoice {
  int size = 1;
  double probability = 1.0;
};

struct ScenarioConfig {
  RoadGeometry geometry;
  VehicleParams params;
  double tau_min = 0.0;
  double tau_max = 0.2;
  double dt_sim = 0.05;
  double dt_search = 0.1;
  double main_volume = 700.0;  // vehicles per hour
  double ramp_volume = 650.0;
  std::vector<PlatoonSizeChoice> platoon_sizes = {{2, 1.0 / 3.0}, {3, 1.0 / 3.0}, {4, 1.0 / 3.0}};
  double entry_speed_min = 13.89;
  double entry_speed_max = 16.67;
  double delta = 2.0;  // intra-platoon bumper-to-bumper gap
  std::uint64_t rng_seed = 42;
  double horizon = 3600.0;
  // Platoon inter-arrival times are uniform on mean * [1 - spread, 1 + spread].
  double headway_spread = 0.5;

  double mean_platoon_size() const;
  // Distance from a platoon leader to its last follower.
  double platoon_length(int size) const { return (size - 1) * (delta + params.vehicle_length); }
  void validate() const;
};

struct ArrivalEvent {
  Road road = Road::kMain;
  double entry_time = 0.0;
  double entry_speed = 0.0;
  int size = 1;

  bool operator==(const ArrivalEvent&) const = default;
};

// Minimum entry-time gap behind a same-road predecessor of `predecessor_size`
// vehicles. Covers the delay-schedule condition (>= tau_max) and rear-end
// safety of the newcomer over its whole delay cruise, assuming the
// predecessor's last follower never moves slower than v_min.
double entry_spacing_floor(const ScenarioConfig& config, int predecessor_size, double entry_speed);

// Seeded platoon arrivals on both roads, sorted by entry time (main first on
// ties). Entry times lie on the dt_sim grid. Any two platoons, on either road,
// enter at least tau_max apart.
std::vector<ArrivalEvent> generate_arrivals(const ScenarioConfig& config);

// True iff the entering leader (at position 0) satisfies the speed bounds and
// the rear-end gap to the predecessor's last follower at its entry time.
// `predecessor_last_follower` holds samples of that vehicle around the entry.
bool validate_entry_feasibility(const ArrivalEvent& event,
                                std::span<const TraceRecord> predecessor_last_follower,
                                const VehicleParams& params);

}  // namespace platoon_merge
