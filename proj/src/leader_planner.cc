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

#include "platoon_merge/leader_planner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "platoon_merge/errors.h"

namespace platoon_merge {

std::string_view to_string(BindingConstraint c) {
  switch (c) {
    case BindingConstraint::kNone:
      return "none";
    case BindingConstraint::kRearEnd:
      return "rear_end";
    case BindingConstraint::kLateral:
      return "lateral";
  }
  return "unknown";
}

double last_follower_exit(double tf, double v_tf, int size, double delta, double vehicle_length) {
  if (!(v_tf > 0.0)) {
    std::ostringstream msg;
    msg << "exit speed " << v_tf << " must be positive";
    throw DegenerateSpeedError(msg.str());
  }
  if (size < 1) throw DegenerateSpeedError("platoon size must be at least 1");
  return tf + (size - 1) * (delta + vehicle_length) / v_tf;
}

double rear_end_margin(const TrajectoryPolynomial& candidate,
                       const std::optional<PredecessorTail>& predecessor,
                       const VehicleParams& params, double dt) {
  if (!predecessor) return std::numeric_limits<double>::infinity();
  const double span = candidate.t_end - candidate.t_start;
  const auto steps = static_cast<long>(std::ceil(span / dt - 1e-9));
  double worst = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= steps; ++i) {
    const double t = std::min(candidate.t_start + static_cast<double>(i) * dt, candidate.t_end);
    const KinematicState own = eval(candidate, t);
    const double margin = predecessor->position(t) - own.p - params.safe_distance(own.v);
    worst = std::min(worst, margin);
  }
  return worst;
}

bool rear_end_ok(const TrajectoryPolynomial& candidate,
                 const std::optional<PredecessorTail>& predecessor, const VehicleParams& params,
                 double dt) {
  return rear_end_margin(candidate, predecessor, params, dt) >= 0.0;
}

double lateral_violation(double tf, double tf_last, const std::vector<CrossPlatoon>& cross,
                         double t_h) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& k : cross) {
    const double after_k = t_h - (tf - k.tf_last);   // we cross after k's last member
    const double before_k = t_h - (k.tf - tf_last);  // our last member crosses before k
    worst = std::max(worst, std::min(after_k, before_k));
  }
  return worst;
}

bool lateral_ok(double tf, double tf_last, const std::vector<CrossPlatoon>& cross, double t_h) {
  return lateral_violation(tf, tf_last, cross, t_h) <= 0.0;
}

PlanRequest make_plan_request(const InfoDelivery& delivery, const RoadGeometry& geometry,
                              const VehicleParams& params, double delta,
                              const PlannerSettings& settings) {
  const PlatoonRecord& self = delivery.info->self();
  PlanRequest req;
  req.platoon_id = self.id;
  req.road = self.road;
  req.t_plan = delivery.t_plan;
  // The leader entered at position 0 and cruised through the delay.
  req.p_plan = self.entry_speed * (delivery.t_plan - self.entry_time);
  req.v_plan = self.entry_speed;
  req.pf = geometry.zone_length(self.road);
  req.window = feasible_window(req.t_plan, req.p_plan, req.v_plan, req.pf, params);
  req.info = delivery.info;
  req.params = params;
  req.size = self.size;
  req.delta = delta;
  req.settings = settings;
  return req;
}

std::optional<PredecessorTail> same_road_predecessor(const PlanRequest& req) {
  const PlatoonRecord& self = req.info->self();
  const PlatoonRecord* ahead = nullptr;
  for (const auto& r : req.info->platoons) {
    if (r.id == self.id || r.road != self.road || r.queue_index > self.queue_index) continue;
    if (ahead == nullptr || r.queue_index > ahead->queue_index) ahead = &r;
  }
  if (ahead == nullptr) return std::nullopt;

  PredecessorTail tail;
  tail.offset = (ahead->size - 1) * (req.delta + req.params.vehicle_length);
  if (ahead->plan) {
    tail.leader = ahead->plan->phi;
  } else {
    // No plan in the snapshot: assume it still cruises at its entry speed.
    tail.leader.c = ahead->entry_speed;
    tail.leader.origin = ahead->entry_time;
    tail.leader.t_start = ahead->entry_time;
    tail.leader.t_end = ahead->entry_time;
  }
  return tail;
}

std::vector<CrossPlatoon> cross_road_platoons(const PlanRequest& req) {
  const PlatoonRecord& self = req.info->self();
  std::vector<CrossPlatoon> cross;
  for (const auto& r : req.info->platoons) {
    if (r.road == self.road || r.queue_index > self.queue_index || !r.plan) continue;
    if (r.plan->tf_last < req.t_plan - req.params.exit_headway) continue;
    cross.push_back({r.plan->tf, r.plan->tf_last});
  }
  return cross;
}

Plan plan_leader(const PlanRequest& req) {
  const FeasibleWindow& w = req.window;
  if (w.empty()) {
    std::ostringstream msg;
    msg << "platoon " << req.platoon_id << ": empty feasible window [" << w.t_lower << ", "
        << w.t_upper << "]";
    throw PlanningInfeasibleError(req.platoon_id, "window", w.t_upper - w.t_lower, msg.str());
  }

  const auto predecessor = same_road_predecessor(req);
  const auto cross = cross_road_platoons(req);
  const double dt = req.settings.dt_search;
  const auto last_step = static_cast<long>(std::floor((w.t_upper - w.t_lower) / dt + 1e-9));

  BindingConstraint binding = BindingConstraint::kNone;
  double last_margin = 0.0;
  for (long k = 0; k <= last_step; ++k) {
    const double tf = w.t_lower + static_cast<double>(k) * dt;
    const TrajectoryPolynomial phi = solve_boundary({req.t_plan, req.p_plan, req.v_plan, tf, req.pf});

    const double rear = rear_end_margin(phi, predecessor, req.params, req.settings.dt_check);
    if (rear < 0.0) {
      binding = BindingConstraint::kRearEnd;
      last_margin = rear;
      continue;
    }
    const double v_tf = eval(phi, tf).v;
    const double tf_last =
        last_follower_exit(tf, v_tf, req.size, req.delta, req.params.vehicle_length);
    const double lateral = lateral_violation(tf, tf_last, cross, req.params.exit_headway);
    if (lateral > 0.0) {
      binding = BindingConstraint::kLateral;
      last_margin = -lateral;
      continue;
    }
    return Plan{tf, phi, tf_last, static_cast<int>(k), binding};
  }

  std::ostringstream msg;
  msg << "platoon " << req.platoon_id << ": no exit time in [" << w.t_lower << ", " << w.t_upper
      << "] satisfies the " << to_string(binding) << " constraint (last margin " << last_margin << ")";
  throw PlanningInfeasibleError(req.platoon_id, std::string(to_string(binding)), last_margin, msg.str());
}

}  // namespace platoon_merge
