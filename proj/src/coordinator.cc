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

#include "platoon_merge/coordinator.h"

#include <algorithm>
#include <sstream>

#include "platoon_merge/errors.h"

namespace platoon_merge {
namespace {

// Message timestamps are sums of a few doubles; equal schedules must compare equal.
constexpr double kScheduleSlack = 1e-9;

std::string platoon_name(PlatoonId id) { return "platoon " + std::to_string(id); }

}  // namespace

void DelayModel::validate() const {
  if (!(tau_min >= 0.0 && tau_min <= tau_max)) {
    throw ConfigError("delay.tau_min", "need 0 <= tau_min <= tau_max");
  }
}

const PlatoonRecord* PlatoonInfoSet::find(PlatoonId id) const {
  for (const auto& r : platoons) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const PlatoonRecord& PlatoonInfoSet::self() const {
  const PlatoonRecord* r = find(owner);
  if (r == nullptr) throw ProtocolError("info set lacks its owner's entry record");
  return *r;
}

std::vector<TrajectoryPolynomial> PlatoonInfoSet::phis() const {
  std::vector<TrajectoryPolynomial> out;
  for (const auto& r : platoons) {
    if (r.plan) out.push_back(r.plan->phi);
  }
  return out;
}

std::vector<int> PlatoonInfoSet::sizes() const {
  std::vector<int> out;
  for (const auto& r : platoons) out.push_back(r.size);
  return out;
}

std::vector<double> PlatoonInfoSet::entry_times() const {
  std::vector<double> out;
  for (const auto& r : platoons) out.push_back(r.entry_time);
  return out;
}

std::vector<double> PlatoonInfoSet::exit_times() const {
  std::vector<double> out;
  for (const auto& r : platoons) {
    if (r.plan) out.push_back(r.plan->tf);
  }
  return out;
}

Coordinator::Coordinator(DelayModel delay, std::uint64_t seed) : delay_(delay), rng_(seed) {
  delay_.validate();
}

double Coordinator::register_entry(PlatoonId id, Road road, double t0, int size, double v0) {
  if (records_.count(id) > 0) throw ProtocolError(platoon_name(id) + " registered twice");
  if (t0 < 0.0) throw ProtocolError(platoon_name(id) + " has a negative entry time");
  PlatoonRecord rec;
  rec.id = id;
  rec.queue_index = static_cast<int>(order_.size());
  rec.road = road;
  rec.size = size;
  rec.entry_time = t0;
  rec.entry_speed = v0;
  std::uniform_real_distribution<double> latency(0.5 * delay_.tau_min, 0.5 * delay_.tau_max);
  rec.realized_request_latency = latency(rng_);
  rec.realized_publish_latency = latency(rng_);
  records_.emplace(id, rec);
  order_.push_back(id);
  queue_.push_back(id);
  return t0 + delay_.one_way();
}

InfoDelivery Coordinator::snapshot_for(PlatoonId id) const {
  const PlatoonRecord& own = record(id);
  const double request_time = own.entry_time + delay_.one_way();

  auto info = std::make_shared<PlatoonInfoSet>();
  info->owner = id;
  info->request_time = request_time;
  for (PlatoonId other : order_) {
    const PlatoonRecord& rec = records_.at(other);
    if (rec.queue_index > own.queue_index) break;
    PlatoonRecord copy = rec;
    if (other != id) {
      const bool arrived =
          copy.plan && copy.plan->publication_time <= request_time + kScheduleSlack;
      if (!arrived) {
        copy.plan.reset();
        info->missing_plans.push_back(other);
      }
    } else {
      copy.plan.reset();
    }
    info->platoons.push_back(std::move(copy));
  }
  return {own.entry_time + delay_.tau_max, std::move(info)};
}

InfoDelivery Coordinator::info_set_available_at(PlatoonId id) const {
  InfoDelivery delivery = snapshot_for(id);
  if (!delivery.info->missing_plans.empty()) {
    std::ostringstream msg;
    msg << "stale info set for " << platoon_name(id) << ": plans of";
    for (PlatoonId m : delivery.info->missing_plans) msg << ' ' << m;
    msg << " had not reached the coordinator by " << delivery.info->request_time;
    throw StalenessError(msg.str());
  }
  return delivery;
}

double Coordinator::publish_plan(PlatoonId id, const TrajectoryPolynomial& phi, double tf,
                                 double tf_last, double planned_at) {
  PlatoonRecord& rec = mutable_record(id);
  if (rec.plan) throw ProtocolError(platoon_name(id) + " published its plan twice");
  if (planned_at < rec.entry_time + delay_.tau_max - kScheduleSlack) {
    std::ostringstream msg;
    msg << platoon_name(id) << " published at " << planned_at
        << ", before its planning time " << rec.entry_time + delay_.tau_max;
    throw ProtocolError(msg.str());
  }
  PublishedPlan plan;
  plan.phi = phi;
  plan.tf = tf;
  plan.tf_last = tf_last;
  plan.planned_at = planned_at;
  plan.publication_time = rec.entry_time + 1.5 * delay_.tau_max;
  rec.plan = plan;
  return plan.publication_time;
}

bool Coordinator::remove_exited(PlatoonId id, double t) {
  if (queue_.empty()) throw ProtocolError("removal of " + platoon_name(id) + " from an empty queue");
  auto it = std::find(queue_.begin(), queue_.end(), id);
  if (it == queue_.end()) throw ProtocolError(platoon_name(id) + " is not in the queue");
  PlatoonRecord& rec = mutable_record(id);
  if (!rec.plan || t <= rec.plan->tf_last) return false;
  queue_.erase(it);
  rec.archived = true;
  return true;
}

const PlatoonRecord& Coordinator::record(PlatoonId id) const {
  auto it = records_.find(id);
  if (it == records_.end()) throw ProtocolError(platoon_name(id) + " is unknown");
  return it->second;
}

PlatoonRecord& Coordinator::mutable_record(PlatoonId id) {
  auto it = records_.find(id);
  if (it == records_.end()) throw ProtocolError(platoon_name(id) + " is unknown");
  return it->second;
}

}  // namespace platoon_merge
