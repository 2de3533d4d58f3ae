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

#include "platoon_merge/follower_control.h"

#include <algorithm>
#include <cmath>
#include <functional>

namespace platoon_merge {
namespace {

// Calls fn(ahead, behind) for consecutive members of the same platoon that are
// both platoon controlled at the same step.
void for_each_member_pair(const SimTrace& trace,
                          const std::function<void(const TraceRecord&, const TraceRecord&)>& fn) {
  std::vector<const TraceRecord*> chunk;
  auto flush = [&] {
    std::sort(chunk.begin(), chunk.end(), [](const TraceRecord* x, const TraceRecord* y) {
      return x->platoon_id != y->platoon_id ? x->platoon_id < y->platoon_id : x->member < y->member;
    });
    for (std::size_t i = 1; i < chunk.size(); ++i) {
      const TraceRecord& ahead = *chunk[i - 1];
      const TraceRecord& behind = *chunk[i];
      if (ahead.platoon_id != behind.platoon_id || behind.member != ahead.member + 1) continue;
      if (!is_platoon_controlled(ahead.mode) || !is_platoon_controlled(behind.mode)) continue;
      fn(ahead, behind);
    }
    chunk.clear();
  };
  for (const auto& r : trace.records) {
    if (!chunk.empty() && chunk.front()->step != r.step) flush();
    chunk.push_back(&r);
  }
  flush();
}

}  // namespace

GapReport check_intra_platoon_gaps(const SimTrace& trace, double delta, double vehicle_length,
                                   double tol) {
  GapReport report;
  for_each_member_pair(trace, [&](const TraceRecord& ahead, const TraceRecord& behind) {
    const double error = std::abs(ahead.p - behind.p - (delta + vehicle_length));
    ++report.samples;
    if (error > tol) ++report.violations;
    if (error > report.max_error || report.worst_platoon < 0) {
      report.max_error = std::max(report.max_error, error);
      report.worst_platoon = behind.platoon_id;
      report.worst_member = behind.member;
      report.worst_t = behind.t;
    }
  });
  report.passed = report.violations == 0;
  return report;
}

StringStabilityReport check_string_stability(std::span<const std::vector<double>> controls) {
  StringStabilityReport report;
  for (std::size_t j = 1; j < controls.size(); ++j) {
    const auto& prev = controls[j - 1];
    const auto& cur = controls[j];
    const std::size_t n = std::min(prev.size(), cur.size());
    for (std::size_t k = 0; k < n; ++k) {
      report.sup_difference = std::max(report.sup_difference, std::abs(cur[k] - prev[k]));
    }
  }
  report.stable = report.sup_difference == 0.0;
  return report;
}

StringStabilityReport check_string_stability(const SimTrace& trace) {
  StringStabilityReport report;
  for_each_member_pair(trace, [&](const TraceRecord& ahead, const TraceRecord& behind) {
    report.sup_difference = std::max(report.sup_difference, std::abs(behind.u - ahead.u));
  });
  report.stable = report.sup_difference == 0.0;
  return report;
}

}  // namespace platoon_merge
