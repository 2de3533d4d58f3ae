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

#include "platoon_merge/trace.h"

#include <cmath>
#include <limits>

namespace platoon_merge {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kEntry:
      return "entry";
    case EventKind::kRequestReceived:
      return "request_received";
    case EventKind::kPlan:
      return "plan";
    case EventKind::kPublication:
      return "publication";
    case EventKind::kModeTransition:
      return "mode_transition";
    case EventKind::kLeaderExit:
      return "leader_exit";
    case EventKind::kLastFollowerExit:
      return "last_follower_exit";
    case EventKind::kRemoved:
      return "removed";
    case EventKind::kViolation:
      return "violation";
    case EventKind::kDiagnostic:
      return "diagnostic";
  }
  return "unknown";
}

double SimEvent::value(std::string_view name) const {
  for (const auto& [key, v] : values) {
    if (key == name) return v;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::map<int, std::vector<std::size_t>> SimTrace::index_by_vehicle() const {
  std::map<int, std::vector<std::size_t>> index;
  for (std::size_t i = 0; i < records.size(); ++i) index[records[i].vehicle_id].push_back(i);
  return index;
}

std::vector<TraceRecord> SimTrace::vehicle_records(int vehicle_id) const {
  std::vector<TraceRecord> out;
  for (const auto& r : records) {
    if (r.vehicle_id == vehicle_id) out.push_back(r);
  }
  return out;
}

std::vector<const SimEvent*> SimTrace::events_of(EventKind kind) const {
  std::vector<const SimEvent*> out;
  for (const auto& e : events) {
    if (e.kind == kind) out.push_back(&e);
  }
  return out;
}

double crossing_time(std::span<const TraceRecord> samples, double position, double from_t) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& r = samples[i];
    if (r.t < from_t || r.p < position) continue;
    if (i == 0 || samples[i - 1].t < from_t) {
      // Already past the position at the first usable sample.
      return r.p == position ? r.t : std::numeric_limits<double>::quiet_NaN();
    }
    const auto& prev = samples[i - 1];
    const double w = (position - prev.p) / (r.p - prev.p);
    return prev.t + w * (r.t - prev.t);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace platoon_merge
