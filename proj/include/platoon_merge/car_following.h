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

#include <optional>
#include <span>

#include "platoon_merge/scenario.h"

namespace platoon_merge {

// Human driver parameters for the Intelligent Driver Model plus the
// priority-yield rule used on the ramp.
struct CarFollowingParams {
  double desired_speed = 16.67;
  double max_accel = 1.5;
  double comfortable_decel = 2.0;
  double desired_time_headway = 1.2;
  double jam_distance = 2.0;
  double lookahead = 150.0;
  double critical_gap = 4.0;
  double accel_exponent = 4.0;

  void validate(const VehicleParams& vehicle) const;
};

struct Kinematics {
  double p = 0.0;  // front bumper
  double v = 0.0;
};

// IDM acceleration clipped to [u_min, u_max]. `lead` is the vehicle (or
// virtual stop line, with zero length) directly ahead.
double car_following_accel(const Kinematics& own, const std::optional<Kinematics>& lead,
                           double lead_length, const CarFollowingParams& cf,
                           const VehicleParams& vehicle);

enum class YieldDecision { kProceed, kYield };

// Ramp vehicles give way when a main-road vehicle behind them would reach the
// conflict point less than the critical gap after them.
YieldDecision yield_decision(const Kinematics& ramp_vehicle, std::span<const Kinematics> main_traffic,
                             const RoadGeometry& geometry, const CarFollowingParams& cf);

}  // namespace platoon_merge
