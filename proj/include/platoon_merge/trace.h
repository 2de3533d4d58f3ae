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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "platoon_merge/road.h"

namespace platoon_merge {

struct TraceRecord {
  std::int64_t step = 0;
  double t = 0.0;
  int vehicle_id = 0;
  int platoon_id = 0;
  int member = 0;
  Road road = Road::kMain;
  VehicleMode mode = VehicleMode::kCarFollowing;
  double p = 0.0;
  double v = 0.0;
  double u = 0.0;
  double fuel_rate = 0.0;
};

enum class EventKind {
  kEntry,
  kRequestReceived,
  kPlan,
  kPublication,
  kModeTransition,
  kLeaderExit,
  kLastFollowerExit,
  kRemoved,
  kViolation,
  kDiagnostic,
};

std::string_view to_string(EventKind k);

struct SimEvent {
  double t = 0.0;
  EventKind kind = EventKind::kDiagnostic;
  int platoon_id = -1;
  int vehicle_id = -1;
  std::string label;
  std::vector<std::pair<std::string, double>> values;

  // Returns the named value, or NaN when absent.
  double value(std::string_view name) const;
};

// Per-step samples for every vehicle plus the run's event log. Records are
// ordered by step, then by vehicle id.
struct SimTrace {
  double dt = 0.0;
  std::vector<TraceRecord> records;
  std::vector<SimEvent> events;

  // Record indices grouped by vehicle, each list in increasing time.
  std::map<int, std::vector<std::size_t>> index_by_vehicle() const;

  std::vector<TraceRecord> vehicle_records(int vehicle_id) const;

  std::vector<const SimEvent*> events_of(EventKind kind) const;
};

// Linear interpolation of the time at which a vehicle's sampled position first
// reaches `position` at or after `from_t`. Returns NaN if it never does.
double crossing_time(std::span<const TraceRecord> samples, double position, double from_t = -1e300);

}  // namespace platoon_merge
