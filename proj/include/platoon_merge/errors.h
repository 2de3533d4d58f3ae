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

#include <stdexcept>
#include <string>

namespace platoon_merge {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or unparsable configuration. `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// The requested traffic volume cannot be realized under the entry spacing floor.
class InfeasibleConfigError : public Error {
 public:
  InfeasibleConfigError(std::string binding_constraint, const std::string& what)
      : Error(what), binding_constraint_(std::move(binding_constraint)) {}
  const std::string& binding_constraint() const { return binding_constraint_; }

 private:
  std::string binding_constraint_;
};

class DegenerateBoundaryError : public Error {
 public:
  using Error::Error;
};

class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateSpeedError : public Error {
 public:
  using Error::Error;
};

// Misuse of the coordinator message protocol (duplicate ids, double publish...).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// A planner snapshot is missing a predecessor's plan.
class StalenessError : public Error {
 public:
  using Error::Error;
};

class PlanningInfeasibleError : public Error {
 public:
  PlanningInfeasibleError(int platoon_id, std::string binding_constraint,
                          double last_margin, const std::string& what)
      : Error(what),
        platoon_id_(platoon_id),
        binding_constraint_(std::move(binding_constraint)),
        last_margin_(last_margin) {}
  int platoon_id() const { return platoon_id_; }
  const std::string& binding_constraint() const { return binding_constraint_; }
  double last_margin() const { return last_margin_; }

 private:
  int platoon_id_;
  std::string binding_constraint_;
  double last_margin_;
};

class MonitorViolationError : public Error {
 public:
  using Error::Error;
};

class ComparisonError : public Error {
 public:
  using Error::Error;
};

}  // namespace platoon_merge
