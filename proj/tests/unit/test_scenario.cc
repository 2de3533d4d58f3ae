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

#include <cmath>

#include <gtest/gtest.h>

#include "platoon_merge/errors.h"
#include "platoon_merge/scenario.h"

namespace platoon_merge {
namespace {

int count_on(const std::vector<ArrivalEvent>& events, Road road) {
  int n = 0;
  for (const auto& e : events) n += e.road == road;
  return n;
}

TEST(GenerateArrivalsTest, VolumeMatchesMeanPlatoonSize) {
  const ScenarioConfig config;
  const auto events = generate_arrivals(config);
  const double expected_main = config.main_volume * config.horizon / 3600.0 / config.mean_platoon_size();
  const double expected_ramp = config.ramp_volume * config.horizon / 3600.0 / config.mean_platoon_size();
  EXPECT_NEAR(count_on(events, Road::kMain), expected_main, 0.1 * expected_main);
  EXPECT_NEAR(count_on(events, Road::kRamp), expected_ramp, 0.1 * expected_ramp);
}

TEST(GenerateArrivalsTest, ZeroHorizonIsEmpty) {
  ScenarioConfig config;
  config.horizon = 0.0;
  EXPECT_TRUE(generate_arrivals(config).empty());
}

TEST(GenerateArrivalsTest, SeedDeterminesEvents) {
  ScenarioConfig config;
  config.rng_seed = 42;
  EXPECT_EQ(generate_arrivals(config), generate_arrivals(config));
  ScenarioConfig other = config;
  other.rng_seed = 43;
  EXPECT_NE(generate_arrivals(config), generate_arrivals(other));
}

TEST(GenerateArrivalsTest, SpacingGridAndBounds) {
  for (double tau : {0.0, 0.2, 0.5, 1.0}) {
    ScenarioConfig config;
    config.tau_max = tau;
    const auto events = generate_arrivals(config);
    ASSERT_FALSE(events.empty());
    const ArrivalEvent* last[2] = {nullptr, nullptr};
    for (std::size_t i = 0; i < events.size(); ++i) {
      const auto& e = events[i];
      EXPECT_GE(e.entry_speed, config.entry_speed_min);
      EXPECT_LE(e.entry_speed, config.entry_speed_max);
      EXPECT_TRUE(e.size >= 2 && e.size <= 4);
      EXPECT_LT(e.entry_time, config.horizon);
      const double steps = e.entry_time / config.dt_sim;
      EXPECT_NEAR(steps, std::round(steps), 1e-6);
      if (i > 0) EXPECT_GE(e.entry_time - events[i - 1].entry_time, tau - 1e-9);
      const auto*& prev = last[e.road == Road::kMain ? 0 : 1];
      if (prev != nullptr) {
        EXPECT_GE(e.entry_time - prev->entry_time, entry_spacing_floor(config, prev->size, e.entry_speed) - 1e-9);
      }
      prev = &e;
    }
  }
}

TEST(GenerateArrivalsTest, InfeasibleVolumeNamesConstraint) {
  ScenarioConfig config;
  config.main_volume = 20000.0;
  try {
    generate_arrivals(config);
    FAIL() << "expected InfeasibleConfigError";
  } catch (const InfeasibleConfigError& e) {
    EXPECT_FALSE(e.binding_constraint().empty());
  }
}

TEST(EntrySpacingFloorTest, CoversDelayAndRearEnd) {
  ScenarioConfig config;
  const auto& p = config.params;
  const double v = 16.0;
  const double expected = (p.standstill_distance + p.reaction_time * v + 3 * (config.delta + p.vehicle_length) +
                           (v - p.v_min) * config.tau_max) / p.v_min;
  EXPECT_NEAR(entry_spacing_floor(config, 4, v), expected, 1e-12);
  config.tau_max = 100.0;
  EXPECT_GE(entry_spacing_floor(config, 1, v), 100.0);
}

TraceRecord sample(double t, double p, double v) {
  TraceRecord r;
  r.t = t;
  r.p = p;
  r.v = v;
  return r;
}

TEST(EntryFeasibilityTest, FarPredecessor) {
  const VehicleParams prm;
  const ArrivalEvent e{Road::kMain, 10.0, 15.0, 3};
  const std::vector<TraceRecord> tail = {sample(10.0, 600.0, 15.0)};
  EXPECT_TRUE(validate_entry_feasibility(e, tail, prm));
}

TEST(EntryFeasibilityTest, BoundaryGapAdmitted) {
  const VehicleParams prm;
  const ArrivalEvent e{Road::kMain, 10.0, 15.0, 3};
  const double gap = prm.safe_distance(15.0);
  EXPECT_TRUE(validate_entry_feasibility(e, std::vector<TraceRecord>{sample(10.0, gap, 15.0)}, prm));
  EXPECT_FALSE(validate_entry_feasibility(e, std::vector<TraceRecord>{sample(10.0, gap - 0.01, 15.0)}, prm));
}

TEST(EntryFeasibilityTest, InterpolatesBetweenSamples) {
  const VehicleParams prm;
  const ArrivalEvent e{Road::kMain, 10.0, 15.0, 3};
  const double gap = prm.safe_distance(15.0);
  const std::vector<TraceRecord> tail = {sample(9.0, gap - 15.0, 15.0), sample(11.0, gap + 15.0, 15.0)};
  EXPECT_TRUE(validate_entry_feasibility(e, tail, prm));
}

TEST(EntryFeasibilityTest, SpeedOutsideBounds) {
  const VehicleParams prm;
  EXPECT_FALSE(validate_entry_feasibility({Road::kRamp, 0.0, 20.0, 2}, {}, prm));
  EXPECT_FALSE(validate_entry_feasibility({Road::kRamp, 0.0, 4.0, 2}, {}, prm));
  EXPECT_TRUE(validate_entry_feasibility({Road::kRamp, 0.0, 14.0, 2}, {}, prm));
}

TEST(ScenarioValidateTest, RejectsBadFields) {
  ScenarioConfig c;
  c.tau_max = 0.13;  // not a whole number of steps
  EXPECT_THROW(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.params.u_min = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.geometry.ramp_zone_length = 400.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.platoon_sizes = {{2, 0.5}, {3, 0.2}};
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_NO_THROW(ScenarioConfig{}.validate());
}

}  // namespace
}  // namespace platoon_merge
