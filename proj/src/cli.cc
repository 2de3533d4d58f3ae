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

#include "platoon_merge/cli.h"

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "platoon_merge/config.h"
#include "platoon_merge/errors.h"
#include "platoon_merge/follower_control.h"
#include "platoon_merge/io.h"
#include "platoon_merge/metrics.h"
#include "platoon_merge/sim_engine.h"

namespace platoon_merge {
namespace {

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

int run_cli(const CliOptions& options) {
  SimulationConfig config;
  std::vector<SimMode> modes;
  try {
    config = load_config(options.config_path);
    if (options.seed) config.scenario.rng_seed = *options.seed;
    if (options.horizon) config.scenario.horizon = *options.horizon;
    if (options.tau_max) config.scenario.tau_max = *options.tau_max;
    if (options.dt_sim) config.scenario.dt_sim = *options.dt_sim;
    config.validate();
    if (options.mode == "all") {
      modes = {SimMode::kBaseline1, SimMode::kBaseline2, SimMode::kOptimal};
    } else {
      modes = {parse_sim_mode(options.mode)};
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) {
    std::cerr << "cannot create output directory " << options.out_dir << ": " << ec.message() << "\n";
    return 2;
  }

  std::vector<ArrivalEvent> arrivals;
  try {
    arrivals = arrivals_for(config);
  } catch (const InfeasibleConfigError& e) {
    write_json(options.out_dir / "infeasible.json",
               {{"error", "infeasible_config"}, {"binding_constraint", e.binding_constraint()}, {"message", e.what()}});
    std::cerr << "infeasible configuration: " << e.what() << "\n";
    return 1;
  }

  RunOptions run_options;
  run_options.audit_only = options.audit_only;
  if (options.fault_platoon) run_options.fault = PlanFault{*options.fault_platoon, options.fault_tf_shift};

  int status = 0;
  std::map<std::string, RunSummary> summaries;
  const std::string fingerprint = config.fingerprint();
  for (SimMode mode : modes) {
    const std::string name(to_string(mode));
    RunResult result;
    try {
      result = run(config, mode, arrivals, run_options);
    } catch (const PlanningInfeasibleError& e) {
      write_json(options.out_dir / ("infeasible_" + name + ".json"),
                 {{"error", "planning_infeasible"},
                  {"platoon", e.platoon_id()},
                  {"binding_constraint", e.binding_constraint()},
                  {"last_margin", e.last_margin()},
                  {"message", e.what()}});
      std::cerr << name << ": planning infeasible: " << e.what() << "\n";
      status = 1;
      continue;
    }
    RunSummary summary = summarize(result.trace, config.scenario.geometry, config.scenario.horizon);
    summary.mode = name;
    summary.config_fingerprint = fingerprint;
    summary.violations = static_cast<int>(result.violations.size());
    GapReport gaps;
    StringStabilityReport stability;
    if (mode == SimMode::kOptimal) {
      gaps = check_intra_platoon_gaps(result.trace, config.scenario.delta, config.scenario.params.vehicle_length, 1e-6);
      stability = check_string_stability(result.trace);
    }

    if (options.emit_trace) {
      std::ofstream trace(options.out_dir / ("trace_" + name + ".csv"));
      write_trace_csv(result.trace, trace);
    }
    write_json(options.out_dir / ("summary_" + name + ".json"), summary_json(config, result, summary, gaps, stability));
    write_json(options.out_dir / ("events_" + name + ".json"), events_json(result));
    write_json(options.out_dir / ("violations_" + name + ".json"), violations_json(result.violations));
    {
      std::ofstream vehicles(options.out_dir / ("vehicles_" + name + ".csv"));
      write_vehicle_metrics_csv(summary, vehicles);
    }
    std::cout << fmt::format("{:<10} travel {:8.3f} s  fuel {:.5f} gal  vehicles {:5d}  violations {}{}\n", name,
                             summary.avg_travel_time, summary.avg_fuel_gallon, summary.completed,
                             result.violations.size(), result.aborted ? "  (aborted)" : "");
    if (!result.violations.empty() || result.aborted) status = 1;
    summaries.emplace(name, std::move(summary));
  }

  if (summaries.size() > 1) {
    const ComparisonTable table = compare(summaries);
    std::ofstream out(options.out_dir / "comparison.txt");
    out << table.render();
    std::cout << table.render();
  }
  return status;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Coordinated platoon merging at a highway on-ramp"};
  app.require_subcommand(1);
  CliOptions o;
  CLI::App* run_cmd = app.add_subcommand("run", "Simulate one or all modes");
  run_cmd->add_option("--config,-c", o.config_path, "Scenario file")->required();
  run_cmd->add_option("--mode,-m", o.mode, "baseline1, baseline2, optimal or all")
      ->check(CLI::IsMember({"baseline1", "baseline2", "optimal", "all"}));
  run_cmd->add_option("--out,-o", o.out_dir, "Output directory");
  run_cmd->add_option("--seed", o.seed, "Override the random seed");
  run_cmd->add_option("--horizon", o.horizon, "Override the horizon [s]");
  run_cmd->add_option("--tau-max", o.tau_max, "Override the delay bound [s]");
  run_cmd->add_option("--dt", o.dt_sim, "Override the simulation step [s]");
  run_cmd->add_flag("--audit-only", o.audit_only, "Report violations without aborting the run");
  bool no_trace = false;
  run_cmd->add_flag("--no-trace", no_trace, "Skip the per-step trace CSV");
  run_cmd->add_option("--fault-platoon", o.fault_platoon, "Platoon whose executed plan deviates from its publication");
  run_cmd->add_option("--fault-tf-shift", o.fault_tf_shift, "Exit-time shift applied to the faulty platoon [s]");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  o.emit_trace = !no_trace;
  return run_cli(o);
}

}  // namespace platoon_merge
