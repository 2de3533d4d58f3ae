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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "platoon_merge/errors.h"
#include "platoon_merge/leader_planner.h"

namespace platoon_merge {
namespace {

TEST(LastFollowerExitTest, Examples) {
  EXPECT_DOUBLE_EQ(last_follower_exit(60.0, 16.67, 4, 2.0, 5.0), 60.0 + 21.0 / 16.67);
  EXPECT_DOUBLE_EQ(last_follower_exit(60.0, 10.0, 1, 2.0, 5.0), 60.0);
  EXPECT_THROW(last_follower_exit(60.0, 0.0, 3, 2.0, 5.0), DegenerateSpeedError);
  EXPECT_THROW(last_follower_exit(60.0, -1.0, 3, 2.0, 5.0), DegenerateSpeedError);
}

TEST(LateralTest, Examples) {
  const std::vector<CrossPlatoon> k{{47.0, 49.0}};
  EXPECT_DOUBLE_EQ(lateral_violation(50.0, 51.0, k, 1.5), 0.5);
  EXPECT_FALSE(lateral_ok(50.0, 51.0, k, 1.5));
  EXPECT_TRUE(lateral_ok(50.5, 51.5, k, 1.5));  // exactly t_h after k's last member
  EXPECT_TRUE(lateral_ok(44.0, 45.5, k, 1.5));  // our last member exactly t_h before k
  EXPECT_FALSE(lateral_ok(44.0, 45.6, k, 1.5));
  EXPECT_TRUE(std::isinf(lateral_violation(50.0, 51.0, {}, 1.5)));
  EXPECT_TRUE(lateral_ok(50.0, 51.0, {}, 1.5));
}

TEST(LateralTest, WorstOverCrossPlatoons) {
  const std::vector<CrossPlatoon> k{{30.0, 31.0}, {47.0, 49.0}};
  EXPECT_DOUBLE_EQ(lateral_violation(50.0, 51.0, k, 1.5), 0.5);
}

TEST(RearEndTest, MarginAgainstCruisingTail) {
  VehicleParams prm;
  const auto own = solve_boundary({0.0, 0.0, 15.0, 40.0, 600.0});
  PredecessorTail tail;
  tail.leader = solve_boundary({0.0, 100.0, 15.0, 40.0, 700.0});
  tail.offset = 14.0;
  // Both cruise at 15 m/s: margin = 100 - 14 - (3 + 0.5 * 15).
  EXPECT_NEAR(rear_end_margin(own, tail, prm, 0.05), 100.0 - 14.0 - 10.5, 1e-9);
  EXPECT_TRUE(rear_end_ok(own, tail, prm, 0.05));
  tail.offset = 90.0;
  EXPECT_FALSE(rear_end_ok(own, tail, prm, 0.05));
  EXPECT_TRUE(std::isinf(rear_end_margin(own, std::nullopt, prm, 0.05)));
}

struct Scene {
  Coordinator coord{{0.0, 0.2}};
  RoadGeometry geo;
  VehicleParams prm;
  double delta = 2.0;
  PlannerSettings settings;

  Plan plan(PlatoonId id, Road road, double t0, int size, double v0) {
    coord.register_entry(id, road, t0, size, v0);
    const auto req = request(id);
    const Plan p = plan_leader(req);
    coord.publish_plan(id, p.phi, p.tf, p.tf_last, req.t_plan);
    return p;
  }
  PlanRequest request(PlatoonId id) const {
    return make_plan_request(coord.info_set_available_at(id), geo, prm, delta, settings);
  }
};

TEST(PlanLeaderTest, FirstPlatoonTakesWindowLowerBound) {
  Scene s;
  s.coord.register_entry(0, Road::kMain, 0.0, 3, 15.0);
  const auto req = s.request(0);
  EXPECT_DOUBLE_EQ(req.t_plan, 0.2);
  EXPECT_DOUBLE_EQ(req.p_plan, 3.0);
  const Plan p = plan_leader(req);
  EXPECT_DOUBLE_EQ(p.tf, req.window.t_lower);
  EXPECT_EQ(p.iterations, 0);
  EXPECT_EQ(p.binding, BindingConstraint::kNone);
  EXPECT_NEAR(eval(p.phi, p.tf).p, 560.0, 1e-9);
  EXPECT_NEAR(eval(p.phi, p.tf).u, 0.0, 1e-12);
}

TEST(PlanLeaderTest, CrossRoadPlatoonIsDelayedByLateralHeadway) {
  Scene s;
  const Plan p0 = s.plan(0, Road::kMain, 0.0, 3, 15.0);
  const Plan p1 = s.plan(1, Road::kRamp, 0.2, 3, 15.0);
  EXPECT_EQ(p1.binding, BindingConstraint::kLateral);
  EXPECT_GE(p1.tf - p0.tf_last, s.prm.exit_headway - 1e-9);
  EXPECT_LT(p1.tf - s.settings.dt_search - p0.tf_last, s.prm.exit_headway);
}

TEST(PlanLeaderTest, SameRoadFollowerKeepsSafeDistance) {
  Scene s;
  s.plan(0, Road::kMain, 0.0, 3, 15.0);
  const Plan p1 = s.plan(1, Road::kMain, 2.0, 3, 16.0);
  EXPECT_EQ(p1.binding, BindingConstraint::kRearEnd);
  const auto tail = same_road_predecessor(s.request(1));
  ASSERT_TRUE(tail.has_value());
  EXPECT_GE(rear_end_margin(p1.phi, tail, s.prm, s.settings.dt_check), 0.0);
}

// Grid-scan minimality: every grid point below the chosen exit time fails at
// least one of the constraints, recomputed here by hand.
TEST(PlanLeaderTest, ExhaustiveScanMinimality) {
  Scene s;
  const std::vector<std::tuple<Road, double, int, double>> arrivals{
      {Road::kMain, 0.0, 3, 15.0}, {Road::kRamp, 0.4, 2, 14.0}, {Road::kMain, 2.0, 4, 16.0},
      {Road::kRamp, 3.0, 3, 16.5}, {Road::kMain, 5.5, 2, 14.5}, {Road::kRamp, 6.0, 4, 15.5}};
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    const auto [road, t0, size, v0] = arrivals[i];
    const int id = static_cast<int>(i);
    s.coord.register_entry(id, road, t0, size, v0);
    const auto req = s.request(id);
    const Plan plan = plan_leader(req);

    const auto tail = same_road_predecessor(req);
    std::vector<std::pair<double, double>> cross;
    for (const auto& r : req.info->platoons)
      if (r.road != road && r.plan && r.id != id) cross.emplace_back(r.plan->tf, r.plan->tf_last);

    auto passes = [&](double tf) {
      const auto phi = solve_boundary({req.t_plan, req.p_plan, req.v_plan, tf, req.pf});
      for (double t = phi.t_start; t <= phi.t_end + 1e-9; t += s.settings.dt_check) {
        const double tt = std::min(t, phi.t_end);
        const double own = eval(phi, tt).p;
        const double v = eval(phi, tt).v;
        if (tail && tail->position(tt) - own < s.prm.standstill_distance + s.prm.reaction_time * v) return false;
      }
      const double vf = eval(phi, tf).v;
      const double last = tf + (size - 1) * (s.delta + s.prm.vehicle_length) / vf;
      for (const auto& [k_tf, k_last] : cross)
        if (tf - k_last < s.prm.exit_headway && k_tf - last < s.prm.exit_headway) return false;
      return true;
    };

    EXPECT_TRUE(passes(plan.tf)) << "platoon " << id;
    for (int k = 0; k < plan.iterations; ++k)
      EXPECT_FALSE(passes(req.window.t_lower + k * s.settings.dt_search)) << "platoon " << id << " k " << k;
    EXPECT_TRUE(req.window.contains(plan.tf));
    s.coord.publish_plan(id, plan.phi, plan.tf, plan.tf_last, req.t_plan);
  }
}

TEST(PlanLeaderTest, EmptyWindowIsInfeasible) {
  Scene s;
  s.coord.register_entry(0, Road::kMain, 0.0, 3, 15.0);
  auto req = s.request(0);
  req.window.t_upper = req.window.t_lower - 1.0;
  try {
    plan_leader(req);
    FAIL() << "expected PlanningInfeasibleError";
  } catch (const PlanningInfeasibleError& e) {
    EXPECT_EQ(e.platoon_id(), 0);
    EXPECT_EQ(e.binding_constraint(), "window");
  }
}

TEST(PlanLeaderTest, ExhaustedWindowNamesBindingConstraint) {
  Scene s;
  s.plan(0, Road::kMain, 0.0, 3, 15.0);
  s.coord.register_entry(1, Road::kRamp, 0.2, 3, 15.0);
  auto req = s.request(1);
  req.window.t_upper = req.window.t_lower + 0.3;
  try {
    plan_leader(req);
    FAIL() << "expected PlanningInfeasibleError";
  } catch (const PlanningInfeasibleError& e) {
    EXPECT_EQ(e.binding_constraint(), "lateral");
    EXPECT_LT(e.last_margin(), 0.0);
  }
}

TEST(PlanLeaderTest, MissingPredecessorPlanFallsBackToCruise) {
  Scene s;
  s.coord.register_entry(0, Road::kMain, 0.0, 3, 15.0);
  s.coord.register_entry(1, Road::kMain, 0.1, 3, 15.0);
  const auto req = make_plan_request(s.coord.snapshot_for(1), s.geo, s.prm, s.delta, s.settings);
  const auto tail = same_road_predecessor(req);
  ASSERT_TRUE(tail.has_value());
  EXPECT_DOUBLE_EQ(tail->position(10.0), 150.0 - 14.0);
}

TEST(CrossRoadTest, OldPlatoonsArePruned) {
  Scene s;
  const Plan p0 = s.plan(0, Road::kMain, 0.0, 2, 15.0);
  // Still relevant while t_plan - t_h <= tf_last of the main platoon.
  const double t_keep = p0.tf_last + s.prm.exit_headway - 0.2 - 0.01;
  s.coord.register_entry(1, Road::kRamp, t_keep, 2, 15.0);
  EXPECT_EQ(cross_road_platoons(s.request(1)).size(), 1u);

  Scene late;
  late.plan(0, Road::kMain, 0.0, 2, 15.0);
  late.coord.register_entry(1, Road::kRamp, t_keep + 0.02, 2, 15.0);
  EXPECT_TRUE(cross_road_platoons(late.request(1)).empty());
}

}  // namespace
}  // namespace platoon_merge
