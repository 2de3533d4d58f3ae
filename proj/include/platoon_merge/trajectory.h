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

#include <array>
#include <optional>

#include "platoon_merge/scenario.h"

namespace platoon_merge {

struct KinematicState {
  double p = 0.0;
  double v = 0.0;
  double u = 0.0;
};

// Leader plan p(t) = a s^3 + b s^2 + c s + d with s = t - origin. Coefficients
// are kept relative to `origin` (the planning instant) so that large absolute
// times never get cubed.
struct TrajectoryPolynomial {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double origin = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;

  // The same cubic expressed in absolute time, [a, b, c, d] with p(t) = a t^3 + ...
  // Ill-conditioned for large origins; intended for reporting only.
  std::array<double, 4> absolute_coefficients() const;
};

struct BoundaryConditions {
  double t0 = 0.0;
  double p0 = 0.0;
  double v0 = 0.0;
  double tf = 0.0;
  double pf = 0.0;
};

struct FeasibleWindow {
  double t_lower = 0.0;
  double t_upper = 0.0;

  // Candidate exit times, absolute.
  double t_u_max = 0.0;
  double t_v_max = 0.0;
  std::optional<double> t_u_min;  // absent when the deceleration bound can never bind
  double t_v_min = 0.0;

  bool empty() const { return t_upper < t_lower; }
  bool contains(double tf) const { return tf >= t_lower && tf <= t_upper; }
};

// Unique cubic with p(t0)=p0, v(t0)=v0, p(tf)=pf and u(tf)=0.
// Throws DegenerateBoundaryError when tf <= t0.
TrajectoryPolynomial solve_boundary(const BoundaryConditions& bc);

// Position, speed and control at t in [t_start, t_end]; throws OutOfDomainError otherwise.
KinematicState eval(const TrajectoryPolynomial& traj, double t);

// Evaluation over the whole time line: constant-speed cruise before t_start at
// v(t_start) and after t_end at v(t_end), the cubic in between.
KinematicState eval_extended(const TrajectoryPolynomial& traj, double t);

// Interval of exit times whose unconstrained cubic respects the speed and
// control bounds, starting from (t0, p0, v0) and ending at pf.
FeasibleWindow feasible_window(double t0, double p0, double v0, double pf, const VehicleParams& params);

}  // namespace platoon_merge
