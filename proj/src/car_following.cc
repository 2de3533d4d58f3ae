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

#include "platoon_merge/car_following.h"

#include <algorithm>
#include <cmath>

#include "platoon_merge/errors.h"

namespace platoon_merge {
namespace {

constexpr double kMinGap = 0.01;
constexpr double kCreepSpeed = 0.1;

}  // namespace

void CarFollowingParams::validate(const VehicleParams& vehicle) const {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
  };
  require(desired_speed > 0.0 && desired_speed <= vehicle.v_max, "human_driver.desired_speed",
          "must lie in (0, v_max]");
  require(max_accel > 0.0, "human_driver.max_accel", "must be positive");
  require(comfortable_decel > 0.0, "human_driver.comfortable_decel", "must be positive");
  require(desired_time_headway > 0.0, "human_driver.desired_time_headway", "must be positive");
  require(jam_distance > 0.0, "human_driver.jam_distance", "must be positive");
  require(lookahead > 0.0, "human_driver.lookahead", "must be positive");
  require(critical_gap > 0.0, "human_driver.critical_gap", "must be positive");
  require(accel_exponent > 0.0, "human_driver.accel_exponent", "must be positive");
}

double car_following_accel(const Kinematics& own, const std::optional<Kinematics>& lead,
                           double lead_length, const CarFollowingParams& cf,
                           const VehicleParams& vehicle) {
  const double v = std::max(own.v, 0.0);
  double accel = cf.max_accel * (1.0 - std::pow(v / cf.desired_speed, cf.accel_exponent));
  if (lead) {
    const double gap = std::max(lead->p - own.p - lead_length, kMinGap);
    const double closing = v * (v - lead->v) / (2.0 * std::sqrt(cf.max_accel * cf.comfortable_decel));
    const double desired_gap = cf.jam_distance + std::max(0.0, v * cf.desired_time_headway + closing);
    accel -= cf.max_accel * (desired_gap / gap) * (desired_gap / gap);
  }
  return std::clamp(accel, vehicle.u_min, vehicle.u_max);
}

YieldDecision yield_decision(const Kinematics& ramp_vehicle, std::span<const Kinematics> main_traffic,
                             const RoadGeometry& geometry, const CarFollowingParams& cf) {
  const double d_ramp = geometry.conflict_position - ramp_vehicle.p;
  if (d_ramp <= 0.0) return YieldDecision::kProceed;
  // Ramp arrival at the conflict point when accelerating at max_accel.
  const double v = std::max(ramp_vehicle.v, 0.0);
  const double t_ramp = (std::sqrt(v * v + 2.0 * cf.max_accel * d_ramp) - v) / cf.max_accel;
  for (const auto& m : main_traffic) {
    // Main traffic ahead is simply followed.
    if (m.p > geometry.conflict_position || m.p > ramp_vehicle.p) continue;
    const double t_main = (geometry.conflict_position - m.p) / std::max(m.v, kCreepSpeed);
    if (t_main - t_ramp < cf.critical_gap) return YieldDecision::kYield;
  }
  return YieldDecision::kProceed;
}

}  // namespace platoon_merge
