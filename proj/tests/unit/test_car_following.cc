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
#include <vector>

#include "platoon_merge/car_following.h"
#include "platoon_merge/errors.h"

namespace platoon_merge {
namespace {

TEST(CarFollowingTest, FreeRoad) {
  CarFollowingParams cf;
  VehicleParams prm;
  EXPECT_DOUBLE_EQ(car_following_accel({0.0, 0.0}, std::nullopt, 5.0, cf, prm), cf.max_accel);
  EXPECT_NEAR(car_following_accel({0.0, cf.desired_speed}, std::nullopt, 5.0, cf, prm), 0.0, 1e-12);
  const double v = 10.0;
  EXPECT_NEAR(car_following_accel({0.0, v}, std::nullopt, 5.0, cf, prm),
              cf.max_accel * (1.0 - std::pow(v / cf.desired_speed, 4.0)), 1e-12);
}

TEST(CarFollowingTest, InteractionTerm) {
  CarFollowingParams cf;
  VehicleParams prm;
  const Kinematics own{0.0, 10.0};
  const Kinematics lead{40.0, 8.0};
  const double gap = 35.0;
  const double s_star = cf.jam_distance + 10.0 * cf.desired_time_headway +
                        10.0 * 2.0 / (2.0 * std::sqrt(cf.max_accel * cf.comfortable_decel));
  const double expected = cf.max_accel * (1.0 - std::pow(10.0 / cf.desired_speed, 4.0) - std::pow(s_star / gap, 2.0));
  EXPECT_NEAR(car_following_accel(own, lead, 5.0, cf, prm), expected, 1e-12);
}

TEST(CarFollowingTest, ClampedAndMonotoneInGap) {
  CarFollowingParams cf;
  VehicleParams prm;
  EXPECT_DOUBLE_EQ(car_following_accel({0.0, 15.0}, Kinematics{6.0, 0.0}, 5.0, cf, prm), prm.u_min);
  double prev = -1e9;
  for (double gap = 5.0; gap < 200.0; gap += 5.0) {
    const double a = car_following_accel({0.0, 12.0}, Kinematics{gap + 5.0, 12.0}, 5.0, cf, prm);
    EXPECT_GE(a, prev);
    prev = a;
  }
}

TEST(CarFollowingTest, StopLineHoldsStoppedVehicle) {
  CarFollowingParams cf;
  VehicleParams prm;
  const double a = car_following_accel({558.0, 0.0}, Kinematics{560.0, 0.0}, 0.0, cf, prm);
  EXPECT_LE(a, 0.0);
}

TEST(YieldTest, CloseMainVehicleForcesYield) {
  CarFollowingParams cf;
  RoadGeometry geo;
  const Kinematics ramp{555.0, 0.0};
  const std::vector<Kinematics> main{{550.0, 15.0}};
  EXPECT_EQ(yield_decision(ramp, main, geo, cf), YieldDecision::kYield);
}

TEST(YieldTest, DistantMainVehicleLetsRampProceed) {
  CarFollowingParams cf;
  RoadGeometry geo;
  const Kinematics ramp{555.0, 0.0};
  const std::vector<Kinematics> main{{300.0, 15.0}};
  EXPECT_EQ(yield_decision(ramp, main, geo, cf), YieldDecision::kProceed);
}

TEST(YieldTest, MainTrafficAheadIsIgnored) {
  CarFollowingParams cf;
  RoadGeometry geo;
  const std::vector<Kinematics> main{{558.0, 15.0}, {600.0, 15.0}};
  EXPECT_EQ(yield_decision({555.0, 0.0}, main, geo, cf), YieldDecision::kProceed);
  EXPECT_EQ(yield_decision({555.0, 0.0}, {}, geo, cf), YieldDecision::kProceed);
}

TEST(YieldTest, PastConflictPointNeverYields) {
  CarFollowingParams cf;
  RoadGeometry geo;
  const std::vector<Kinematics> main{{559.0, 15.0}};
  EXPECT_EQ(yield_decision({561.0, 5.0}, main, geo, cf), YieldDecision::kProceed);
}

TEST(YieldTest, CriticalGapBoundary) {
  CarFollowingParams cf;
  RoadGeometry geo;
  const Kinematics ramp{560.0 - 12.0, 0.0};
  const double t_ramp = std::sqrt(2.0 * cf.max_accel * 12.0) / cf.max_accel;  // 4 s
  const double lag = 15.0 * (t_ramp + cf.critical_gap);
  EXPECT_EQ(yield_decision(ramp, std::vector<Kinematics>{{560.0 - lag - 1.0, 15.0}}, geo, cf),
            YieldDecision::kProceed);
  EXPECT_EQ(yield_decision(ramp, std::vector<Kinematics>{{560.0 - lag + 1.0, 15.0}}, geo, cf),
            YieldDecision::kYield);
}

TEST(CarFollowingParamsTest, Validation) {
  VehicleParams prm;
  CarFollowingParams cf;
  EXPECT_NO_THROW(cf.validate(prm));
  cf.desired_speed = prm.v_max + 1.0;
  EXPECT_THROW(cf.validate(prm), ConfigError);
  cf = {};
  cf.jam_distance = 0.0;
  EXPECT_THROW(cf.validate(prm), ConfigError);
}

}  // namespace
}  // namespace platoon_merge
