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

#include <ostream>

#include <nlohmann/json.hpp>

#include "platoon_merge/config.h"
#include "platoon_merge/follower_control.h"
#include "platoon_merge/metrics.h"
#include "platoon_merge/sim_engine.h"

namespace platoon_merge {

// One row per vehicle-step: t,id,platoon,j,road,mode,p,v,u,fuel_rate.
void write_trace_csv(const SimTrace& trace, std::ostream& out);

// Coordinator messages, plans, exits and transitions of a run.
nlohmann::json events_json(const RunResult& result);

nlohmann::json violations_json(const std::vector<Violation>& violations);

nlohmann::json summary_json(const SimulationConfig& config, const RunResult& result,
                            const RunSummary& summary, const GapReport& gaps,
                            const StringStabilityReport& stability);

// Per-vehicle travel time and fuel.
void write_vehicle_metrics_csv(const RunSummary& summary, std::ostream& out);

}  // namespace platoon_merge
