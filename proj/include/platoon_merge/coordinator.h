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
#include <memory>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "platoon_merge/trajectory.h"

namespace platoon_merge {

using PlatoonId = int;

// Bounded inter-platoon communication delay. Scheduling always uses the worst
// case: half of tau_max for each direction.
struct DelayModel {
  double tau_min = 0.0;
  double tau_max = 0.0;

  double one_way() const { return 0.5 * tau_max; }
  void validate() const;
};

struct PublishedPlan {
  TrajectoryPolynomial phi;
  double tf = 0.0;
  double tf_last = 0.0;
  double planned_at = 0.0;
  double publication_time = 0.0;
};

struct PlatoonRecord {
  PlatoonId id = -1;
  int queue_index = 0;  // registration order
  Road road = Road::kMain;
  int size = 1;
  double entry_time = 0.0;
  double entry_speed = 0.0;
  std::optional<PublishedPlan> plan;
  bool archived = false;
  // Sampled one-way latencies in [tau_min, tau_max] / 2, diagnostics only.
  double realized_request_latency = 0.0;
  double realized_publish_latency = 0.0;
};

// What a platoon leader receives from the coordinator: every platoon that
// entered before it (queue order, archived ones included) and its own entry
// record. Plans appear only if they had reached the coordinator by the time the
// request landed there.
struct PlatoonInfoSet {
  PlatoonId owner = -1;
  double request_time = 0.0;
  std::vector<PlatoonRecord> platoons;
  // Predecessors whose plan had not reached the coordinator in time.
  std::vector<PlatoonId> missing_plans;

  const PlatoonRecord* find(PlatoonId id) const;
  const PlatoonRecord& self() const;

  std::vector<TrajectoryPolynomial> phis() const;
  std::vector<int> sizes() const;
  std::vector<double> entry_times() const;
  std::vector<double> exit_times() const;
};

struct InfoDelivery {
  double t_plan = 0.0;
  std::shared_ptr<const PlatoonInfoSet> info;
};

// Passive database for platoon entries and plans. Holds the queue of platoons
// inside the control zone and an archive of platoons that have left it.
class Coordinator {
 public:
  explicit Coordinator(DelayModel delay, std::uint64_t seed = 0);

  // Appends the platoon to the queue; returns when the request lands here.
  double register_entry(PlatoonId id, Road road, double t0, int size, double v0);

  // Snapshot delivered to the platoon at t0 + tau_max. Throws StalenessError if
  // any predecessor's plan is missing from it.
  InfoDelivery info_set_available_at(PlatoonId id) const;

  // Same snapshot, but missing plans are only listed, never thrown.
  InfoDelivery snapshot_for(PlatoonId id) const;

  // Records a plan computed at `planned_at`; returns its publication time
  // t0 + 1.5 tau_max.
  double publish_plan(PlatoonId id, const TrajectoryPolynomial& phi, double tf, double tf_last,
                      double planned_at);

  // Moves the platoon to the archive once its last member has crossed the
  // conflict point (t > tf_last). Returns true on removal.
  bool remove_exited(PlatoonId id, double t);

  const std::vector<PlatoonId>& queue() const { return queue_; }
  const PlatoonRecord& record(PlatoonId id) const;
  bool contains(PlatoonId id) const { return records_.count(id) > 0; }
  const DelayModel& delay() const { return delay_; }

 private:
  PlatoonRecord& mutable_record(PlatoonId id);

  DelayModel delay_;
  std::mt19937_64 rng_;
  std::unordered_map<PlatoonId, PlatoonRecord> records_;
  std::vector<PlatoonId> order_;  // every platoon ever registered
  std::vector<PlatoonId> queue_;
};

}  // namespace platoon_merge
