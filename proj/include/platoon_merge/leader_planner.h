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

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "platoon_merge/coordinator.h"
#include "platoon_merge/trajectory.h"

namespace platoon_merge {

enum class BindingConstraint { kNone, kRearEnd, kLateral };

std::string_view to_string(BindingConstraint c);

struct PlannerSettings {
  double dt_search = 0.1;  // exit-time increment
  double dt_check = 0.05;  // sampling step of the rear-end check
};

struct PlanRequest {
  PlatoonId platoon_id = -1;
  Road road = Road::kMain;
  double t_plan = 0.0;
  double p_plan = 0.0;
  double v_plan = 0.0;
  double pf = 0.0;
  FeasibleWindow window;
  std::shared_ptr<const PlatoonInfoSet> info;
  VehicleParams params;
  int size = 1;
  double delta = 0.0;
  PlannerSettings settings;
};

struct Plan {
  double tf = 0.0;
  TrajectoryPolynomial phi;
  double tf_last = 0.0;
  int iterations = 0;  // grid steps taken above the window's lower bound
  BindingConstraint binding = BindingConstraint::kNone;
};

// Last member of a platoon ahead on the same road: its leader's plan shifted
// back by the platoon length.
struct PredecessorTail {
  TrajectoryPolynomial leader;
  double offset = 0.0;  // (M - 1)(Delta + l_c)

  double position(double t) const { return eval_extended(leader, t).p - offset; }
};

struct CrossPlatoon {
  double tf = 0.0;
  double tf_last = 0.0;
};

// Builds the request for `platoon_id` from its info set: cruise over the delay,
// window at t_plan, pf at the conflict point.
PlanRequest make_plan_request(const InfoDelivery& delivery, const RoadGeometry& geometry,
                              const VehicleParams& params, double delta,
                              const PlannerSettings& settings);

// Smallest exit time on the grid t_lower + k dt_search passing both the
// rear-end and the lateral check. Throws PlanningInfeasibleError when the
// window is exhausted.
Plan plan_leader(const PlanRequest& req);

// Smallest value of (tail - p_i(t)) - (gamma + phi v_i(t)) over samples of
// [t_start, t_end] of `candidate` spaced by `dt`. +inf without a predecessor.
double rear_end_margin(const TrajectoryPolynomial& candidate,
                       const std::optional<PredecessorTail>& predecessor,
                       const VehicleParams& params, double dt);

bool rear_end_ok(const TrajectoryPolynomial& candidate,
                 const std::optional<PredecessorTail>& predecessor, const VehicleParams& params,
                 double dt);

// Largest min{t_h - (tf - tf_last_k), t_h - (tf_k - tf_last)} over the cross
// platoons; the lateral constraint holds iff this is <= 0. -inf when empty.
double lateral_violation(double tf, double tf_last, const std::vector<CrossPlatoon>& cross,
                         double t_h);

bool lateral_ok(double tf, double tf_last, const std::vector<CrossPlatoon>& cross, double t_h);

// Time the last member crosses the conflict point when the leader keeps its
// exit speed. Throws DegenerateSpeedError for v_tf <= 0.
double last_follower_exit(double tf, double v_tf, int size, double delta, double vehicle_length);

// Same-road platoon physically ahead of the request's platoon, if any.
std::optional<PredecessorTail> same_road_predecessor(const PlanRequest& req);

// Other-road platoons relevant to the lateral check: planned, earlier in the
// queue, with last-member exit no earlier than t_plan - t_h.
std::vector<CrossPlatoon> cross_road_platoons(const PlanRequest& req);

}  // namespace platoon_merge
