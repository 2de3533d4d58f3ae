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

#include "platoon_merge/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "platoon_merge/errors.h"

namespace platoon_merge {

void FuelModelCoefficients::validate(const VehicleParams& params) const {
  // The cruise polynomial is a cubic; checking a fine grid is enough.
  for (int i = 0; i <= 1000; ++i) {
    const double v = params.v_min + (params.v_max - params.v_min) * i / 1000.0;
    if (fuel_rate(v, 0.0, *this) <= 0.0) {
      throw ConfigError("fuel.cruise", fmt::format("cruise fuel rate not positive at v = {}", v));
    }
  }
}

double fuel_rate(double v, double u, const FuelModelCoefficients& coeffs) {
  const auto& b = coeffs.cruise_poly;
  const auto& c = coeffs.accel_poly;
  const double cruise = b[0] + v * (b[1] + v * (b[2] + v * b[3]));
  const double accel = std::max(u, 0.0) * (c[0] + v * (c[1] + v * c[2]));
  return std::max(cruise + accel, 0.0);
}

namespace {

double lerp(double x0, double y0, double x1, double y1, double x) {
  if (x1 == x0) return y0;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

// Trapezoid integral of the sampled fuel rate restricted to [t_in, t_out].
double integrate_fuel(std::span<const TraceRecord> samples, double t_in, double t_out) {
  double total = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const auto& a = samples[i - 1];
    const auto& b = samples[i];
    const double lo = std::max(a.t, t_in);
    const double hi = std::min(b.t, t_out);
    if (hi <= lo) continue;
    const double r_lo = lerp(a.t, a.fuel_rate, b.t, b.fuel_rate, lo);
    const double r_hi = lerp(a.t, a.fuel_rate, b.t, b.fuel_rate, hi);
    total += 0.5 * (r_lo + r_hi) * (hi - lo);
  }
  return total;
}

}  // namespace

RunSummary summarize(const SimTrace& trace, const RoadGeometry& geometry, double horizon) {
  RunSummary summary;
  const auto index = trace.index_by_vehicle();
  std::vector<TraceRecord> samples;
  double travel_sum = 0.0;
  double fuel_sum = 0.0;
  for (const auto& [vehicle_id, rows] : index) {
    samples.clear();
    for (std::size_t i : rows) samples.push_back(trace.records[i]);
    const double t_in = crossing_time(samples, 0.0);
    const double t_out = std::isnan(t_in) ? t_in : crossing_time(samples, geometry.conflict_position, t_in);
    if (std::isnan(t_in) || std::isnan(t_out)) {
      ++summary.incomplete;
      continue;
    }
    VehicleMetrics m;
    m.vehicle_id = vehicle_id;
    m.platoon_id = samples.front().platoon_id;
    m.road = samples.front().road;
    m.entry_time = t_in;
    m.exit_time = t_out;
    m.travel_time = t_out - t_in;
    m.fuel_ml = integrate_fuel(samples, t_in, t_out);
    m.min_speed = std::numeric_limits<double>::infinity();
    for (const auto& r : samples) {
      if (r.p >= 0.0 && r.p <= geometry.conflict_position) m.min_speed = std::min(m.min_speed, r.v);
    }
    travel_sum += m.travel_time;
    fuel_sum += m.fuel_ml;
    summary.vehicles.push_back(m);
  }
  summary.completed = static_cast<int>(summary.vehicles.size());
  if (summary.completed > 0) {
    summary.avg_travel_time = travel_sum / summary.completed;
    summary.avg_fuel_ml = fuel_sum / summary.completed;
    summary.avg_fuel_gallon = summary.avg_fuel_ml / kMillilitresPerGallon;
  }
  if (horizon > 0.0) summary.throughput = summary.completed * 3600.0 / horizon;
  return summary;
}

double improvement_percent(double baseline, double optimal) {
  if (baseline == 0.0) return 0.0;
  return (baseline - optimal) / baseline * 100.0;
}

ComparisonTable compare(const std::map<std::string, RunSummary>& summaries) {
  if (summaries.empty()) throw ComparisonError("nothing to compare");
  const std::string& fingerprint = summaries.begin()->second.config_fingerprint;
  for (const auto& [mode, s] : summaries) {
    if (s.config_fingerprint != fingerprint) {
      throw ComparisonError(fmt::format("summary '{}' comes from a different configuration ({} vs {})",
                                        mode, s.config_fingerprint, fingerprint));
    }
  }

  static const std::pair<const char*, const char*> kOrder[] = {
      {"baseline1", "Baseline 1"}, {"baseline2", "Baseline 2"}, {"optimal", "Optimal Coordination"}};
  ComparisonTable table;
  for (const auto& [mode, label] : kOrder) {
    auto it = summaries.find(mode);
    if (it == summaries.end()) continue;
    table.rows.push_back({label, it->second.avg_travel_time, it->second.avg_fuel_gallon});
  }
  auto optimal = summaries.find("optimal");
  if (optimal != summaries.end()) {
    for (const auto& [mode, label] : {std::pair{"baseline1", "baseline 1"}, std::pair{"baseline2", "baseline 2"}}) {
      auto it = summaries.find(mode);
      if (it == summaries.end()) continue;
      table.improvements.push_back(
          {fmt::format("Improvement ({}) [%]", label),
           improvement_percent(it->second.avg_travel_time, optimal->second.avg_travel_time),
           improvement_percent(it->second.avg_fuel_gallon, optimal->second.avg_fuel_gallon)});
    }
  }
  return table;
}

std::string ComparisonTable::render() const {
  std::string out = fmt::format("{:<30} {:>22} {:>32}\n", "Performance Metrics", "Avg. travel time [s]",
                                "Avg. fuel consumption [gallon]");
  for (const auto& r : rows) {
    out += fmt::format("{:<30} {:>22.2f} {:>32.4f}\n", r.label, r.travel_time, r.fuel_gallon);
  }
  for (const auto& r : improvements) {
    out += fmt::format("{:<30} {:>22.1f} {:>32.1f}\n", r.label, r.travel_time, r.fuel_gallon);
  }
  return out;
}

}  // namespace platoon_merge
