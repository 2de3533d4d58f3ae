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

#include <span>
#include <vector>

#include "platoon_merge/trace.h"

namespace platoon_merge {

// Leader state a follower subscribes to, at the current instant.
struct MemberInfoSet {
  double p_leader = 0.0;
  double v_leader = 0.0;
  double u_leader = 0.0;
};

// Every follower replicates the leader's control input.
inline double follower_control_input(const MemberInfoSet& info) { return info.u_leader; }

struct GapReport {
  double max_error = 0.0;
  int violations = 0;  // samples with error above tolerance
  int samples = 0;
  int worst_platoon = -1;
  int worst_member = -1;
  double worst_t = 0.0;
  bool passed = true;
};

// Checks |gap - (delta + l_c)| between consecutive members of each platoon at
// every step where both are platoon controlled.
GapReport check_intra_platoon_gaps(const SimTrace& trace, double delta, double vehicle_length,
                                   double tol);

struct StringStabilityReport {
  bool stable = true;
  double sup_difference = 0.0;  // sup over j, k of |u_j[k] - u_{j-1}[k]|
};

// `controls[j]` is member j's control sampled on a common grid. Stable iff
// every member reproduces its predecessor's control exactly.
StringStabilityReport check_string_stability(std::span<const std::vector<double>> controls);

// Runs check_string_stability over every platoon in the trace, using the
// steps where all of its members are platoon controlled.
StringStabilityReport check_string_stability(const SimTrace& trace);

}  // namespace platoon_merge
