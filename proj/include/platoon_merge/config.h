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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "platoon_merge/car_following.h"
#include "platoon_merge/metrics.h"
#include "platoon_merge/scenario.h"

namespace platoon_merge {

// Everything a run needs: the scenario plus the human-driver and fuel models.
struct SimulationConfig {
  std::string name = "onramp_560m";
  ScenarioConfig scenario;
  CarFollowingParams human;
  // Drivers inside a pre-formed human platoon keep a short formation gap.
  CarFollowingParams platoon_human = {.desired_time_headway = 0.3, .jam_distance = 2.0};
  FuelModelCoefficients fuel;
  // Explicit arrival list; generated from the scenario when empty.
  std::vector<ArrivalEvent> arrivals;

  void validate() const;
  // Stable digest of every field, used to match summaries across modes.
  std::string fingerprint() const;
};

// Parses the YAML key-value scenario format. Every key is optional and
// defaults to the canonical scenario; unknown keys are rejected. Errors carry
// the offending field and, when known, the line.
SimulationConfig parse_config(std::string_view text, const std::string& source = "<string>");

SimulationConfig load_config(const std::filesystem::path& path);

// Canonical YAML rendering; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const SimulationConfig& config);

}  // namespace platoon_merge
