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

#include "platoon_merge/coordinator.h"
#include "platoon_merge/errors.h"

namespace platoon_merge {
namespace {

TrajectoryPolynomial cruise_plan(double t0, double tf) { return solve_boundary({t0, 0.0, 15.0, tf, 15.0 * (tf - t0)}); }

TEST(CoordinatorTest, RequestReceipt) {
  Coordinator c({0.0, 0.4});
  EXPECT_DOUBLE_EQ(c.register_entry(0, Road::kMain, 100.0, 3, 15.0), 100.2);
  Coordinator zero({0.0, 0.0});
  EXPECT_DOUBLE_EQ(zero.register_entry(0, Road::kMain, 100.0, 3, 15.0), 100.0);
}

TEST(CoordinatorTest, PublicationTime) {
  Coordinator c({0.0, 0.4});
  c.register_entry(0, Road::kMain, 0.0, 3, 15.0);
  EXPECT_NEAR(c.publish_plan(0, cruise_plan(0.4, 40.0), 40.0, 41.0, 0.4), 0.6, 1e-12);
  EXPECT_NEAR(c.record(0).plan->publication_time, 0.6, 1e-12);

  Coordinator zero({0.0, 0.0});
  zero.register_entry(0, Road::kMain, 7.0, 3, 15.0);
  EXPECT_DOUBLE_EQ(zero.publish_plan(0, cruise_plan(7.0, 40.0), 40.0, 41.0, 7.0), 7.0);
}

TEST(CoordinatorTest, RepublicationIsProtocolError) {
  Coordinator c({0.0, 0.2});
  c.register_entry(0, Road::kMain, 0.0, 3, 15.0);
  c.publish_plan(0, cruise_plan(0.2, 40.0), 40.0, 41.0, 0.2);
  EXPECT_THROW(c.publish_plan(0, cruise_plan(0.2, 40.0), 40.0, 41.0, 0.2), ProtocolError);
}

TEST(CoordinatorTest, EarlyPublicationIsProtocolError) {
  Coordinator c({0.0, 0.2});
  c.register_entry(0, Road::kMain, 0.0, 3, 15.0);
  EXPECT_THROW(c.publish_plan(0, cruise_plan(0.1, 40.0), 40.0, 41.0, 0.1), ProtocolError);
}

TEST(CoordinatorTest, FirstPlatoonSeesOnlyItself) {
  Coordinator c({0.0, 0.2});
  c.register_entry(0, Road::kRamp, 5.0, 2, 14.0);
  const auto d = c.info_set_available_at(0);
  EXPECT_DOUBLE_EQ(d.t_plan, 5.2);
  ASSERT_EQ(d.info->platoons.size(), 1u);
  EXPECT_EQ(d.info->self().id, 0);
  EXPECT_TRUE(d.info->phis().empty());
  EXPECT_TRUE(d.info->missing_plans.empty());
}

TEST(CoordinatorTest, PredecessorPlanPresentAtDelayBoundary) {
  const double tau = 0.4;
  Coordinator c({0.0, tau});
  c.register_entry(0, Road::kMain, 10.0, 3, 15.0);
  c.publish_plan(0, cruise_plan(10.0 + tau, 50.0), 50.0, 51.0, 10.0 + tau);
  c.register_entry(1, Road::kMain, 10.0 + tau, 3, 15.0);
  const auto d = c.info_set_available_at(1);
  ASSERT_NE(d.info->find(0), nullptr);
  EXPECT_TRUE(d.info->find(0)->plan.has_value());
  EXPECT_EQ(d.info->phis().size(), 1u);
}

TEST(CoordinatorTest, TooCloseEntryIsStale) {
  const double tau = 0.4;
  Coordinator c({0.0, tau});
  c.register_entry(0, Road::kMain, 10.0, 3, 15.0);
  c.publish_plan(0, cruise_plan(10.0 + tau, 50.0), 50.0, 51.0, 10.0 + tau);
  c.register_entry(1, Road::kRamp, 10.0 + tau - 0.05, 3, 15.0);
  EXPECT_THROW(c.info_set_available_at(1), StalenessError);
  const auto d = c.snapshot_for(1);
  ASSERT_EQ(d.info->missing_plans.size(), 1u);
  EXPECT_EQ(d.info->missing_plans[0], 0);
}

TEST(CoordinatorTest, RemovalFollowsLastMember) {
  Coordinator c({0.0, 0.2});
  c.register_entry(0, Road::kMain, 0.0, 3, 15.0);
  c.publish_plan(0, cruise_plan(0.2, 40.0), 40.0, 41.0, 0.2);
  EXPECT_FALSE(c.remove_exited(0, 40.5));  // only the leader is past the conflict point
  EXPECT_FALSE(c.remove_exited(0, 41.0));
  EXPECT_TRUE(c.remove_exited(0, 41.05));
  EXPECT_TRUE(c.queue().empty());
  EXPECT_TRUE(c.record(0).archived);
  EXPECT_THROW(c.remove_exited(0, 50.0), ProtocolError);
}

TEST(CoordinatorTest, ArchivedPlansStayVisible) {
  Coordinator c({0.0, 0.2});
  c.register_entry(0, Road::kMain, 0.0, 3, 15.0);
  c.publish_plan(0, cruise_plan(0.2, 40.0), 40.0, 41.0, 0.2);
  c.remove_exited(0, 42.0);
  c.register_entry(1, Road::kRamp, 45.0, 2, 15.0);
  const auto d = c.info_set_available_at(1);
  ASSERT_NE(d.info->find(0), nullptr);
  EXPECT_TRUE(d.info->find(0)->archived);
  EXPECT_TRUE(d.info->find(0)->plan.has_value());
}

TEST(CoordinatorTest, InformationIsMonotone) {
  Coordinator c({0.0, 0.2});
  for (int i = 0; i < 5; ++i) {
    c.register_entry(i, i % 2 ? Road::kRamp : Road::kMain, 3.0 * i, 2, 15.0);
    c.publish_plan(i, cruise_plan(3.0 * i + 0.2, 3.0 * i + 40.0), 3.0 * i + 40.0, 3.0 * i + 41.0, 3.0 * i + 0.2);
  }
  for (int i = 1; i < 5; ++i) {
    const auto d = c.info_set_available_at(i);
    EXPECT_EQ(d.info->phis().size(), static_cast<std::size_t>(i));
    EXPECT_EQ(d.info->sizes().size(), static_cast<std::size_t>(i + 1));
  }
}

TEST(CoordinatorTest, RemovalErrors) {
  Coordinator c({0.0, 0.2});
  EXPECT_THROW(c.remove_exited(3, 10.0), ProtocolError);
  c.register_entry(0, Road::kMain, 0.0, 3, 15.0);
  EXPECT_THROW(c.remove_exited(3, 10.0), ProtocolError);
  EXPECT_THROW(c.record(3), ProtocolError);
}

TEST(CoordinatorTest, RealizedLatenciesWithinBounds) {
  Coordinator c({0.1, 0.6}, 9);
  for (int i = 0; i < 20; ++i) {
    c.register_entry(i, Road::kMain, i * 1.0, 2, 15.0);
    const auto& r = c.record(i);
    EXPECT_GE(r.realized_request_latency, 0.05);
    EXPECT_LE(r.realized_request_latency, 0.3);
    EXPECT_GE(r.realized_publish_latency, 0.05);
    EXPECT_LE(r.realized_publish_latency, 0.3);
  }
}

TEST(DelayModelTest, Validation) {
  EXPECT_THROW((DelayModel{0.5, 0.2}.validate()), ConfigError);
  EXPECT_THROW((DelayModel{-0.1, 0.2}.validate()), ConfigError);
  EXPECT_NO_THROW((DelayModel{0.0, 0.0}.validate()));
}

}  // namespace
}  // namespace platoon_merge
