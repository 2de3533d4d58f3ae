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

#include "platoon_merge/trajectory.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "platoon_merge/errors.h"

namespace platoon_merge {
namespace {

constexpr double kDomainSlack = 1e-9;

}  // namespace

std::array<double, 4> TrajectoryPolynomial::absolute_coefficients() const {
  // Expand a(t - o)^3 + b(t - o)^2 + c(t - o) + d.
  const double o = origin;
  return {a, b - 3.0 * a * o, 3.0 * a * o * o - 2.0 * b * o + c,
          -a * o * o * o + b * o * o - c * o + d};
}

TrajectoryPolynomial solve_boundary(const BoundaryConditions& bc) {
  const double horizon = bc.tf - bc.t0;
  if (!(horizon > 0.0)) {
    std::ostringstream msg;
    msg << "degenerate boundary: tf (" << bc.tf << ") must exceed t0 (" << bc.t0 << ")";
    throw DegenerateBoundaryError(msg.str());
  }
  // In s = t - t0: d = p0, c = v0; u(T) = 0 gives b = -3 a T, and p(T) = pf
  // then gives a = (v0 T - D) / (2 T^3).
  const double distance = bc.pf - bc.p0;
  TrajectoryPolynomial traj;
  traj.a = (bc.v0 * horizon - distance) / (2.0 * horizon * horizon * horizon);
  traj.b = -3.0 * traj.a * horizon;
  traj.c = bc.v0;
  traj.d = bc.p0;
  traj.origin = bc.t0;
  traj.t_start = bc.t0;
  traj.t_end = bc.tf;
  return traj;
}

namespace {

KinematicState eval_relative(const TrajectoryPolynomial& traj, double s) {
  KinematicState st;
  st.p = ((traj.a * s + traj.b) * s + traj.c) * s + traj.d;
  st.v = (3.0 * traj.a * s + 2.0 * traj.b) * s + traj.c;
  st.u = 6.0 * traj.a * s + 2.0 * traj.b;
  return st;
}

}  // namespace

KinematicState eval(const TrajectoryPolynomial& traj, double t) {
  if (t < traj.t_start - kDomainSlack || t > traj.t_end + kDomainSlack) {
    std::ostringstream msg;
    msg << "t = " << t << " outside trajectory domain [" << traj.t_start << ", " << traj.t_end << "]";
    throw OutOfDomainError(msg.str());
  }
  return eval_relative(traj, t - traj.origin);
}

KinematicState eval_extended(const TrajectoryPolynomial& traj, double t) {
  if (t < traj.t_start) {
    const KinematicState start = eval_relative(traj, traj.t_start - traj.origin);
    return {start.p + start.v * (t - traj.t_start), start.v, 0.0};
  }
  if (t > traj.t_end) {
    const KinematicState end = eval_relative(traj, traj.t_end - traj.origin);
    return {end.p + end.v * (t - traj.t_end), end.v, 0.0};
  }
  return eval_relative(traj, t - traj.origin);
}

FeasibleWindow feasible_window(double t0, double p0, double v0, double pf,
                               const VehicleParams& params) {
  const double distance = pf - p0;
  FeasibleWindow w;

  // Exit speed 1.5 D / T - 0.5 v0 decreases with T; the initial control
  // 3 (D - v0 T) / T^2 is the extreme one because u is linear and u(T) = 0.
  const double t_v_max = 3.0 * distance / (v0 + 2.0 * params.v_max);
  const double t_u_max =
      (std::sqrt(9.0 * v0 * v0 + 12.0 * distance * params.u_max) - 3.0 * v0) / (2.0 * params.u_max);
  const double t_v_min = 3.0 * distance / (v0 + 2.0 * params.v_min);

  w.t_v_max = t0 + t_v_max;
  w.t_u_max = t0 + t_u_max;
  w.t_v_min = t0 + t_v_min;
  // Both upper-speed and upper-control bounds must hold, so the binding one is the later.
  w.t_lower = t0 + std::max(t_u_max, t_v_max);

  const double discriminant = 9.0 * v0 * v0 + 12.0 * distance * params.u_min;
  if (discriminant < 0.0) {
    // The initial deceleration never reaches u_min.
    w.t_upper = w.t_v_min;
  } else {
    // Smaller root of u_min T^2 + 3 v0 T - 3 D = 0: above it u(t0) < u_min.
    const double t_u_min = (std::sqrt(discriminant) - 3.0 * v0) / (2.0 * params.u_min);
    w.t_u_min = t0 + t_u_min;
    w.t_upper = t0 + std::min(t_u_min, t_v_min);
  }
  return w;
}

}  // namespace platoon_merge
