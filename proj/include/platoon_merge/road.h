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

#include <string_view>

namespace platoon_merge {

enum class Road { kMain, kRamp };

constexpr Road other_road(Road r) { return r == Road::kMain ? Road::kRamp : Road::kMain; }

constexpr std::string_view to_string(Road r) { return r == Road::kMain ? "main" : "ramp"; }

// Control authority over a vehicle. Platoon-controlled vehicles move through the
// first three in order; human-driven vehicles are always car following.
enum class VehicleMode { kCruisingDelay, kExecutingPlan, kPostExitCruise, kCarFollowing };

constexpr std::string_view to_string(VehicleMode m) {
  switch (m) {
    case VehicleMode::kCruisingDelay:
      return "cruising_delay";
    case VehicleMode::kExecutingPlan:
      return "executing_plan";
    case VehicleMode::kPostExitCruise:
      return "post_exit_cruise";
    case VehicleMode::kCarFollowing:
      return "car_following";
  }
  return "unknown";
}

constexpr bool is_platoon_controlled(VehicleMode m) { return m != VehicleMode::kCarFollowing; }

}  // namespace platoon_merge
