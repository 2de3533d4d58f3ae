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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "platoon_merge/config.h"
#include "platoon_merge/coordinator.h"
#include "platoon_merge/leader_planner.h"
#include "platoon_merge/trace.h"

namespace platoon_merge {

enum class SimMode { kBaseline1, kBaseline2, kOptimal };

std::string_view to_string(SimMode m);
SimMode parse_sim_mode(std::string_view text);

struct VehicleState {
  int id = 0;
  int platoon_id = 0;
  int member = 0;
  Road road = Road::kMain;
  double p = 0.0;
  double v = 0.0;
  double u = 0.0;
  VehicleMode mode = VehicleMode::kCarFollowing;
  // Ramp gap acceptance, human-driven modes only.
  bool yielding = false;
  bool committed = false;
  bool crossed_conflict = false;
};

struct Violation {
  double t = 0.0;
  std::string kind;  // u_bounds, v_bounds, rear_end, intra_gap, lateral, overlap, staleness
  int platoon_id = -1;
  int other_id = -1;  // second platoon or vehicle involved, if any
  int vehicle_id = -1;
  double margin = 0.0;  // signed amount by which the constraint was missed
};

// Makes one platoon execute a different exit time than the one it publishes.
struct PlanFault {
  PlatoonId platoon_id = 0;
  double executed_tf_shift = 0.0;
};

struct RunOptions {
  bool audit_only = false;  // monitors report without aborting
  std::optional<PlanFault> fault;
  bool record_trace = true;
};

struct PlanRecord {
  PlatoonId platoon_id = -1;
  Road road = Road::kMain;
  int size = 1;
  double t0 = 0.0;
  double t_plan = 0.0;
  double publication_time = 0.0;
  FeasibleWindow window;
  Plan plan;
  std::vector<PlatoonId> snapshot_platoons;
  std::vector<PlatoonId> snapshot_missing;
  double observed_leader_exit = 0.0;  // NaN until observed
  double observed_last_exit = 0.0;
};

struct Transition {
  double t = 0.0;
  int vehicle_id = 0;
  VehicleMode from = VehicleMode::kCruisingDelay;
  VehicleMode to = VehicleMode::kExecutingPlan;
  double position_mismatch = 0.0;
  double speed_mismatch = 0.0;
};

// One simulated on-ramp merge. Advances on a fixed step; all coordinator
// events due at a step are handled, in queue order, before vehicles move.
class World {
 public:
  World(SimulationConfig config, SimMode mode, std::vector<ArrivalEvent> arrivals,
        RunOptions options = {});
  ~World();
  World(World&&) noexcept;
  World& operator=(World&&) noexcept;

  // Handles due events, records every vehicle at the current time, runs the
  // monitors and integrates to the next step. Throws MonitorViolationError on
  // a violation unless audit-only.
  void step();

  // Constraint check of the current state.
  std::vector<Violation> monitor_constraints() const;

  double time() const;
  std::int64_t step_index() const;
  const std::vector<VehicleState>& vehicles() const;
  const SimTrace& trace() const;
  SimTrace take_trace();
  const std::vector<Violation>& violations() const;
  const std::vector<PlanRecord>& plans() const;
  const std::vector<Transition>& transitions() const;
  const Coordinator& coordinator() const;
  int platoons_completed() const;
  int platoons_in_network() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RunResult {
  SimMode mode = SimMode::kOptimal;
  std::vector<ArrivalEvent> arrivals;
  SimTrace trace;
  std::vector<Violation> violations;
  std::vector<PlanRecord> plans;
  std::vector<Transition> transitions;
  bool aborted = false;
  std::string abort_reason;
  int platoons_completed = 0;
  int platoons_in_network = 0;
};

// Arrival list for a configuration: the explicit list if given, else generated.
std::vector<ArrivalEvent> arrivals_for(const SimulationConfig& config);

// Full run over the horizon. Planning infeasibility propagates as
// PlanningInfeasibleError; monitor violations end the run early (aborted).
RunResult run(const SimulationConfig& config, SimMode mode, const RunOptions& options = {});

// Same, on a given arrival list (matched experiments across modes).
RunResult run(const SimulationConfig& config, SimMode mode, std::vector<ArrivalEvent> arrivals,
              const RunOptions& options = {});

}  // namespace platoon_merge
