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

#include "platoon_merge/io.h"

#include <cmath>

#include <fmt/format.h>

namespace platoon_merge {
namespace {

using nlohmann::json;

// JSON has no NaN; unobserved quantities become null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json plan_json(const PlanRecord& r) {
  const auto& phi = r.plan.phi;
  return {{"platoon", r.platoon_id},
          {"road", std::string(to_string(r.road))},
          {"size", r.size},
          {"t0", r.t0},
          {"t_plan", r.t_plan},
          {"publication", r.publication_time},
          {"window", {number(r.window.t_lower), number(r.window.t_upper)}},
          {"tf", r.plan.tf},
          {"tf_last", r.plan.tf_last},
          {"phi", {phi.a, phi.b, phi.c, phi.d}},
          {"phi_origin", phi.origin},
          {"iterations", r.plan.iterations},
          {"binding", std::string(to_string(r.plan.binding))},
          {"snapshot", r.snapshot_platoons},
          {"missing", r.snapshot_missing},
          {"observed_leader_exit", number(r.observed_leader_exit)},
          {"observed_last_exit", number(r.observed_last_exit)}};
}

}  // namespace

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  out << "t,id,platoon,j,road,mode,p,v,u,fuel_rate\n";
  fmt::memory_buffer buf;
  for (const auto& r : trace.records) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{:.2f},{},{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.t,
                   r.vehicle_id, r.platoon_id, r.member, to_string(r.road), to_string(r.mode), r.p, r.v, r.u,
                   r.fuel_rate);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

json events_json(const RunResult& result) {
  json events = json::array();
  for (const auto& e : result.trace.events) {
    json values = json::object();
    for (const auto& [name, value] : e.values) values[name] = number(value);
    events.push_back({{"t", e.t},
                      {"kind", std::string(to_string(e.kind))},
                      {"platoon", e.platoon_id},
                      {"vehicle", e.vehicle_id},
                      {"label", e.label},
                      {"values", values}});
  }
  json transitions = json::array();
  for (const auto& tr : result.transitions) {
    transitions.push_back({{"t", tr.t},
                           {"vehicle", tr.vehicle_id},
                           {"from", std::string(to_string(tr.from))},
                           {"to", std::string(to_string(tr.to))},
                           {"position_mismatch", tr.position_mismatch},
                           {"speed_mismatch", tr.speed_mismatch}});
  }
  return {{"mode", std::string(to_string(result.mode))}, {"events", events}, {"transitions", transitions}};
}

json violations_json(const std::vector<Violation>& violations) {
  json out = json::array();
  for (const auto& v : violations) {
    out.push_back({{"t", v.t},
                   {"kind", v.kind},
                   {"platoon", v.platoon_id},
                   {"other", v.other_id},
                   {"vehicle", v.vehicle_id},
                   {"margin", v.margin}});
  }
  return out;
}

json summary_json(const SimulationConfig& config, const RunResult& result, const RunSummary& summary,
                  const GapReport& gaps, const StringStabilityReport& stability) {
  json plans = json::array();
  for (const auto& r : result.plans) plans.push_back(plan_json(r));
  return {{"scenario", config.name},
          {"mode", summary.mode},
          {"config_fingerprint", summary.config_fingerprint},
          {"seed", config.scenario.rng_seed},
          {"horizon", config.scenario.horizon},
          {"aborted", result.aborted},
          {"abort_reason", result.abort_reason},
          {"platoons_arrived", result.arrivals.size()},
          {"platoons_completed", result.platoons_completed},
          {"metrics",
           {{"avg_travel_time_s", summary.avg_travel_time},
            {"avg_fuel_ml", summary.avg_fuel_ml},
            {"avg_fuel_gallon", summary.avg_fuel_gallon},
            {"throughput_veh_per_h", summary.throughput},
            {"completed_vehicles", summary.completed},
            {"incomplete_vehicles", summary.incomplete}}},
          {"formation",
           {{"max_gap_error", gaps.max_error},
            {"gap_violations", gaps.violations},
            {"samples", gaps.samples},
            {"passed", gaps.passed}}},
          {"string_stability", {{"stable", stability.stable}, {"sup_control_difference", stability.sup_difference}}},
          {"violation_count", result.violations.size()},
          {"violations", violations_json(result.violations)},
          {"plans", plans}};
}

void write_vehicle_metrics_csv(const RunSummary& summary, std::ostream& out) {
  out << "id,platoon,road,entry_time,exit_time,travel_time,fuel_ml,min_speed\n";
  for (const auto& v : summary.vehicles) {
    out << fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", v.vehicle_id, v.platoon_id,
                       to_string(v.road), v.entry_time, v.exit_time, v.travel_time, v.fuel_ml, v.min_speed);
  }
}

}  // namespace platoon_merge
