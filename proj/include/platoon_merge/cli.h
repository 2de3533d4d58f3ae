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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace platoon_merge {

struct CliOptions {
  std::filesystem::path config_path;
  std::string mode = "all";  // baseline1, baseline2, optimal, all
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::optional<double> tau_max;
  std::optional<double> dt_sim;
  bool audit_only = false;
  bool emit_trace = true;
  // Fault fixture: platoon id and exit-time shift applied to its executed plan.
  std::optional<int> fault_platoon;
  double fault_tf_shift = 0.0;
};

// Executes the requested mode(s) and writes the outputs. Returns 0 on clean
// runs, 1 on violations or infeasibility, 2 on configuration errors.
int run_cli(const CliOptions& options);

// Parses argv (subcommand `run`) and calls run_cli.
int cli_main(int argc, char** argv);

}  // namespace platoon_merge
