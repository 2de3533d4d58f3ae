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
#include <map>
#include <string>
#include <vector>

#include "platoon_merge/scenario.h"
#include "platoon_merge/trace.h"

namespace platoon_merge {

// Polynomial fuel-rate metamodel, rate = cruise(v) + max(u, 0) * accel(v), in mL/s.
// Defaults follow the light-duty passenger car calibration widely used with it.
struct FuelModelCoefficients {
  std::array<double, 4> cruise_poly = {0.1569, 2.450e-2, -7.415e-4, 5.975e-5};
  std::array<double, 3> accel_poly = {0.07224, 9.681e-2, 1.075e-3};

  void validate(const VehicleParams& params) const;
};

inline constexpr double kMillilitresPerGallon = 3785.411784;

double fuel_rate(double v, double u, const FuelModelCoefficients& coeffs);

struct VehicleMetrics {
  int vehicle_id = 0;
  int platoon_id = 0;
  Road road = Road::kMain;
  double entry_time = 0.0;  // crossing of the zone entry
  double exit_time = 0.0;   // crossing of the conflict point
  double travel_time = 0.0;
  double fuel_ml = 0.0;
  double min_speed = 0.0;  // in-zone
};

struct RunSummary {
  std::string mode;
  std::string config_fingerprint;
  double avg_travel_time = 0.0;
  double avg_fuel_ml = 0.0;
  double avg_fuel_gallon = 0.0;
  double throughput = 0.0;  // completed vehicles per hour of horizon
  int completed = 0;
  int incomplete = 0;
  int violations = 0;
  std::vector<VehicleMetrics> vehicles;
};

// Per-vehicle travel time and in-zone fuel, averaged over vehicles that both
// entered and left the zone within the trace. Fuel is the trapezoid integral
// of the sampled rate, clipped at interpolated zone crossings.
RunSummary summarize(const SimTrace& trace, const RoadGeometry& geometry, double horizon);

struct ComparisonRow {
  std::string label;
  double travel_time = 0.0;
  double fuel_gallon = 0.0;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;         // one per mode present
  std::vector<ComparisonRow> improvements; // optimal vs each baseline, percent
  std::string render() const;
};

// (baseline - optimal) / baseline * 100.
double improvement_percent(double baseline, double optimal);

// Throws ComparisonError when summaries stem from different configurations.
ComparisonTable compare(const std::map<std::string, RunSummary>& summaries);

}  // namespace platoon_merge
