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

// Independent reference computations used by the tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "platoon_merge/trajectory.h"

namespace platoon_merge::testing {

// Classical RK4 on p'' = u(t) from (t0, p0, v0) to t1.
inline KinematicState rk4_integrate(const std::function<double(double)>& u, double t0, double p0, double v0,
                                    double t1, int steps) {
  const double h = (t1 - t0) / steps;
  double p = p0;
  double v = v0;
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const double k1p = v, k1v = u(t);
    const double k2p = v + 0.5 * h * k1v, k2v = u(t + 0.5 * h);
    const double k3p = v + 0.5 * h * k2v, k3v = u(t + 0.5 * h);
    const double k4p = v + h * k3v, k4v = u(t + h);
    p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return {p, v, u(t1)};
}

// Exact bounds check of one candidate exit time. The cubic is rebuilt from its
// power form by hand; control is linear and speed quadratic in time, so the
// extremes sit at the ends or at the speed vertex.
struct BoundCheck {
  bool u_ok = true;
  bool v_max_ok = true;
  bool v_min_ok = true;
  bool ok() const { return u_ok && v_max_ok && v_min_ok; }
};

inline BoundCheck check_bounds(double p0, double v0, double D, double T, const VehicleParams& prm,
                               double tol = 1e-12) {
  (void)p0;
  const double a = (v0 * T - D) / (2.0 * T * T * T);
  const double b = -3.0 * a * T;
  auto u = [&](double s) { return 6 * a * s + 2 * b; };
  auto v = [&](double s) { return 3 * a * s * s + 2 * b * s + v0; };
  BoundCheck c;
  const double u_lo = std::min(u(0), u(T)), u_hi = std::max(u(0), u(T));
  c.u_ok = u_lo >= prm.u_min - tol && u_hi <= prm.u_max + tol;
  double v_lo = std::min(v(0), v(T)), v_hi = std::max(v(0), v(T));
  if (a != 0.0) {
    const double s_star = -b / (3 * a);
    if (s_star > 0 && s_star < T) {
      v_lo = std::min(v_lo, v(s_star));
      v_hi = std::max(v_hi, v(s_star));
    }
  }
  c.v_max_ok = v_hi <= prm.v_max + tol;
  c.v_min_ok = v_lo >= prm.v_min - tol;
  return c;
}

// Window by bisection on the feasibility predicate, bracketed from the cruise
// exit time D / v0 (always feasible). Returns absolute {lower, upper}.
inline std::pair<double, double> bisection_window(double t0, double p0, double v0, double pf,
                                                  const VehicleParams& prm, double tol = 1e-10) {
  const double D = pf - p0;
  const double cruise = D / v0;
  auto feasible = [&](double T) { return check_bounds(p0, v0, D, T, prm).ok(); };
  double lo = 1e-9, hi = cruise;
  if (feasible(lo)) {
    hi = lo;
  } else {
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? hi : lo) = mid;
    }
  }
  const double lower = hi;
  double a = cruise, b = cruise * 2;
  while (feasible(b)) b *= 2;
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    (feasible(mid) ? a : b) = mid;
  }
  return {t0 + lower, t0 + a};
}

// Central finite-difference derivative.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace platoon_merge::testing
