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

#include "platoon_merge/sim_engine.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "platoon_merge/car_following.h"
#include "platoon_merge/errors.h"
#include "platoon_merge/follower_control.h"
#include "platoon_merge/metrics.h"

namespace platoon_merge {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBoundTol = 1e-9;
constexpr double kGapTol = 1e-6;
constexpr double kHeadwayTol = 1e-6;
// Members of a human platoon stick with their leader's merge decision while
// this close behind it.
constexpr double kCohesionDistance = 30.0;
// Completed platoons older than this cannot conflict laterally with a new exit.
constexpr double kLateralMemory = 120.0;

struct PendingSpawn {
  int vehicle_id = 0;
  int platoon_index = 0;
  int member = 0;
  double position = 0.0;
};

struct PlatoonRuntime {
  PlatoonId id = 0;
  ArrivalEvent arrival;
  std::int64_t entry_step = 0;
  std::int64_t plan_step = 0;
  int first_vehicle = 0;
  bool spawned = false;
  bool planned = false;
  bool leader_exited = false;
  bool fully_exited = false;
  bool post_exit = false;
  bool removal_pending = false;
  TrajectoryPolynomial executed;
  double exec_tf = 0.0;
  double observed_leader_exit = kNaN;
  double observed_last_exit = kNaN;
  int plan_record = -1;
};

}  // namespace

std::string_view to_string(SimMode m) {
  switch (m) {
    case SimMode::kBaseline1:
      return "baseline1";
    case SimMode::kBaseline2:
      return "baseline2";
    case SimMode::kOptimal:
      return "optimal";
  }
  return "unknown";
}

SimMode parse_sim_mode(std::string_view text) {
  if (text == "baseline1") return SimMode::kBaseline1;
  if (text == "baseline2") return SimMode::kBaseline2;
  if (text == "optimal") return SimMode::kOptimal;
  throw ConfigError("mode", "unknown mode '" + std::string(text) + "'");
}

struct World::Impl {
  SimulationConfig config;
  const ScenarioConfig& sc;
  const VehicleParams& prm;
  SimMode mode;
  RunOptions options;
  std::vector<ArrivalEvent> arrivals;

  std::int64_t k = 0;
  double dt;
  double conflict;
  double spacing;  // delta + vehicle length
  Coordinator coordinator;
  std::vector<PlatoonRuntime> platoons;
  std::vector<VehicleState> vehicles;  // active, sorted by id
  std::vector<double> prev_p;          // indexed like `vehicles`
  std::vector<PendingSpawn> pending;   // human-driven insertions waiting for room
  std::vector<int> completed;          // platoon indices, exit order
  std::size_t next_arrival = 0;

  SimTrace trace;
  std::vector<Violation> violations;
  std::vector<Violation> step_violations;  // found outside the state monitor this step
  std::vector<PlanRecord> plans;
  std::vector<Transition> transitions;
  int n_completed = 0;

  Impl(SimulationConfig cfg, SimMode m, std::vector<ArrivalEvent> arr, RunOptions opt)
      : config(std::move(cfg)),
        sc(config.scenario),
        prm(config.scenario.params),
        mode(m),
        options(std::move(opt)),
        arrivals(std::move(arr)),
        dt(config.scenario.dt_sim),
        conflict(config.scenario.geometry.conflict_position),
        spacing(config.scenario.delta + config.scenario.params.vehicle_length),
        coordinator(DelayModel{config.scenario.tau_min, config.scenario.tau_max}, config.scenario.rng_seed) {
    config.validate();
    trace.dt = dt;
    const auto tau_steps = std::llround(sc.tau_max / dt);
    int vehicle_id = 0;
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
      PlatoonRuntime p;
      p.id = static_cast<PlatoonId>(i);
      p.arrival = arrivals[i];
      p.entry_step = std::llround(arrivals[i].entry_time / dt);
      p.plan_step = p.entry_step + tau_steps;
      p.first_vehicle = vehicle_id;
      vehicle_id += arrivals[i].size;
      platoons.push_back(p);
    }
  }

  double now() const { return static_cast<double>(k) * dt; }
  bool optimal() const { return mode == SimMode::kOptimal; }

  VehicleState* find_vehicle(int id) {
    auto it = std::lower_bound(vehicles.begin(), vehicles.end(), id,
                               [](const VehicleState& v, int x) { return v.id < x; });
    return it != vehicles.end() && it->id == id ? &*it : nullptr;
  }
  const VehicleState* find_vehicle(int id) const { return const_cast<Impl*>(this)->find_vehicle(id); }

  VehicleState* member(const PlatoonRuntime& p, int j) { return find_vehicle(p.first_vehicle + j); }
  const VehicleState* member_const(const PlatoonRuntime& p, int j) const { return find_vehicle(p.first_vehicle + j); }

  void add_vehicle(const VehicleState& v) {
    auto it = std::lower_bound(vehicles.begin(), vehicles.end(), v.id,
                               [](const VehicleState& a, int x) { return a.id < x; });
    const auto pos = it - vehicles.begin();
    vehicles.insert(it, v);
    prev_p.insert(prev_p.begin() + pos, v.p);
  }

  void log(EventKind kind, double t, int platoon, int vehicle, std::string label,
           std::vector<std::pair<std::string, double>> values = {}) {
    trace.events.push_back({t, kind, platoon, vehicle, std::move(label), std::move(values)});
  }

  // ---- step phases -------------------------------------------------------

  void remove_departed() {
    const double end = conflict + sc.geometry.downstream_length;
    for (std::size_t i = 0; i < vehicles.size();) {
      if (vehicles[i].p > end) {
        vehicles.erase(vehicles.begin() + static_cast<long>(i));
        prev_p.erase(prev_p.begin() + static_cast<long>(i));
      } else {
        ++i;
      }
    }
  }

  void update_executing(PlatoonRuntime& p, double t) {
    const int n = p.arrival.size;
    if (t <= p.exec_tf) {
      const KinematicState lead = eval(p.executed, t);
      set_members(p, lead, VehicleMode::kExecutingPlan);
      return;
    }
    // Leader has passed its planned exit time: cruise at the exit speed.
    const KinematicState at_exit = eval(p.executed, p.exec_tf);
    const KinematicState cruise{at_exit.p + at_exit.v * (t - p.exec_tf), at_exit.v, 0.0};
    for (int j = 0; j < n; ++j) {
      if (VehicleState* v = member(p, j)) {
        transitions.push_back({p.exec_tf, v->id, VehicleMode::kExecutingPlan, VehicleMode::kPostExitCruise,
                               std::abs(at_exit.p - eval(p.executed, p.exec_tf).p), 0.0});
      }
    }
    set_members(p, cruise, VehicleMode::kPostExitCruise);
    p.post_exit = true;
    log(EventKind::kModeTransition, p.exec_tf, p.id, p.first_vehicle, "post_exit_cruise",
        {{"v_exit", at_exit.v}});
  }

  void set_members(PlatoonRuntime& p, const KinematicState& lead, VehicleMode m) {
    const MemberInfoSet info{lead.p, lead.v, lead.u};
    for (int j = 0; j < p.arrival.size; ++j) {
      VehicleState* v = member(p, j);
      if (v == nullptr || v->mode == VehicleMode::kCarFollowing) continue;
      v->p = lead.p - j * spacing;
      v->v = lead.v;
      v->u = j == 0 ? lead.u : follower_control_input(info);
      v->mode = m;
    }
  }

  void spawn_optimal(PlatoonRuntime& p) {
    const double t0 = p.arrival.entry_time;
    // Entry feasibility against the same-road predecessor's tail.
    for (auto it = platoons.rbegin(); it != platoons.rend(); ++it) {
      if (it->id >= p.id || !it->spawned || it->arrival.road != p.arrival.road) continue;
      if (const VehicleState* tail = member(*it, it->arrival.size - 1)) {
        TraceRecord r;
        r.t = now();
        r.p = tail->p;
        r.v = tail->v;
        if (!validate_entry_feasibility(p.arrival, std::span<const TraceRecord>(&r, 1), prm)) {
          log(EventKind::kDiagnostic, t0, p.id, -1, "entry_infeasible");
        }
      }
      break;
    }
    for (int j = 0; j < p.arrival.size; ++j) {
      VehicleState v;
      v.id = p.first_vehicle + j;
      v.platoon_id = p.id;
      v.member = j;
      v.road = p.arrival.road;
      v.p = -j * spacing;
      v.v = p.arrival.entry_speed;
      v.mode = VehicleMode::kCruisingDelay;
      add_vehicle(v);
    }
    p.spawned = true;
    const double receipt =
        coordinator.register_entry(p.id, p.arrival.road, t0, p.arrival.size, p.arrival.entry_speed);
    log(EventKind::kEntry, t0, p.id, p.first_vehicle, std::string(to_string(p.arrival.road)),
        {{"v0", p.arrival.entry_speed}, {"size", p.arrival.size}});
    log(EventKind::kRequestReceived, receipt, p.id, -1, "");
  }

  void plan_platoon(PlatoonRuntime& p) {
    const InfoDelivery delivery = coordinator.snapshot_for(p.id);
    PlanRecord rec;
    rec.platoon_id = p.id;
    rec.road = p.arrival.road;
    rec.size = p.arrival.size;
    rec.t0 = p.arrival.entry_time;
    rec.t_plan = delivery.t_plan;
    rec.observed_leader_exit = kNaN;
    rec.observed_last_exit = kNaN;
    for (const auto& r : delivery.info->platoons) {
      if (r.id != p.id) rec.snapshot_platoons.push_back(r.id);
    }
    rec.snapshot_missing = delivery.info->missing_plans;
    for (PlatoonId missing : delivery.info->missing_plans) {
      step_violations.push_back({delivery.t_plan, "staleness", p.id, missing, -1, 0.0});
      log(EventKind::kDiagnostic, delivery.t_plan, p.id, -1, "stale_info_set",
          {{"missing_platoon", missing}});
    }

    const PlanRequest req = make_plan_request(delivery, sc.geometry, prm, sc.delta,
                                              PlannerSettings{sc.dt_search, sc.dt_sim});
    rec.window = req.window;
    if (req.window.empty()) {
      log(EventKind::kDiagnostic, delivery.t_plan, p.id, -1, "empty_window",
          {{"t_lower", req.window.t_lower}, {"t_upper", req.window.t_upper}});
    }
    const Plan plan = plan_leader(req);
    rec.plan = plan;
    rec.publication_time = coordinator.publish_plan(p.id, plan.phi, plan.tf, plan.tf_last, delivery.t_plan);

    p.executed = plan.phi;
    p.exec_tf = plan.tf;
    if (options.fault && options.fault->platoon_id == p.id) {
      p.exec_tf = plan.tf + options.fault->executed_tf_shift;
      p.executed = solve_boundary({req.t_plan, req.p_plan, req.v_plan, p.exec_tf, req.pf});
      log(EventKind::kDiagnostic, delivery.t_plan, p.id, -1, "fault_injected",
          {{"published_tf", plan.tf}, {"executed_tf", p.exec_tf}});
    }
    p.planned = true;

    const double t = now();
    const KinematicState lead = eval(p.executed, t);
    for (int j = 0; j < p.arrival.size; ++j) {
      if (const VehicleState* v = member(p, j)) {
        transitions.push_back({t, v->id, VehicleMode::kCruisingDelay, VehicleMode::kExecutingPlan,
                               std::abs(v->p - (lead.p - j * spacing)), std::abs(v->v - lead.v)});
      }
    }
    set_members(p, lead, VehicleMode::kExecutingPlan);

    log(EventKind::kPlan, delivery.t_plan, p.id, p.first_vehicle, std::string(to_string(plan.binding)),
        {{"t0", rec.t0},
         {"t_plan", delivery.t_plan},
         {"t_lower", req.window.t_lower},
         {"t_upper", req.window.t_upper},
         {"tf", plan.tf},
         {"tf_last", plan.tf_last},
         {"iterations", plan.iterations}});
    log(EventKind::kPublication, rec.publication_time, p.id, -1, "");
    p.plan_record = static_cast<int>(plans.size());
    plans.push_back(std::move(rec));
  }

  // Human-driven insertion: members appear behind the entry at their nominal
  // spacing once there is room.
  void queue_human_spawn(PlatoonRuntime& p) {
    const auto& cf = config.human;
    const bool platoon = mode == SimMode::kBaseline2;
    const double individual = prm.vehicle_length + cf.jam_distance + p.arrival.entry_speed * cf.desired_time_headway;
    for (int j = 0; j < p.arrival.size; ++j) {
      pending.push_back({p.first_vehicle + j, static_cast<int>(p.id), j, -j * (platoon ? spacing : individual)});
    }
    p.spawned = true;
    log(EventKind::kEntry, p.arrival.entry_time, p.id, p.first_vehicle, std::string(to_string(p.arrival.road)),
        {{"v0", p.arrival.entry_speed}, {"size", p.arrival.size}});
  }

  void try_human_spawns() {
    bool blocked[2] = {false, false};
    std::vector<PendingSpawn> still;
    for (const auto& s : pending) {
      const PlatoonRuntime& p = platoons[static_cast<std::size_t>(s.platoon_index)];
      const int r = p.arrival.road == Road::kMain ? 0 : 1;
      if (blocked[r]) {
        still.push_back(s);
        continue;
      }
      // Nearest vehicle ahead on the same road, or merged downstream. Earlier
      // vehicles still short of the entry push the insertion back.
      const VehicleState* ahead = nullptr;
      bool behind_earlier = false;
      for (const auto& v : vehicles) {
        if (v.p < conflict && v.road != p.arrival.road) continue;
        if (v.p < s.position) {
          behind_earlier = true;
          break;
        }
        if (ahead == nullptr || v.p < ahead->p) ahead = &v;
      }
      if (behind_earlier) {
        blocked[r] = true;
        still.push_back(s);
        continue;
      }
      double speed = p.arrival.entry_speed;
      const bool own_platoon = ahead != nullptr && ahead->platoon_id == p.id && mode == SimMode::kBaseline2;
      const CarFollowingParams& cf = own_platoon ? config.platoon_human : config.human;
      if (ahead != nullptr) {
        const double gap = ahead->p - s.position - prm.vehicle_length;
        const double needed = own_platoon ? sc.delta - kGapTol : cf.jam_distance + 0.5 * speed * cf.desired_time_headway;
        if (gap < needed) {
          blocked[r] = true;
          still.push_back(s);
          continue;
        }
        // Enter slow enough to stop with comfortable braking behind a vehicle
        // that brakes as hard as it can.
        const double room = gap - cf.jam_distance + ahead->v * ahead->v / (2.0 * -prm.u_min);
        speed = own_platoon ? std::min(speed, ahead->v)
                            : std::min(speed, std::sqrt(2.0 * cf.comfortable_decel * std::max(room, 0.0)));
      }
      VehicleState v;
      v.id = s.vehicle_id;
      v.platoon_id = p.id;
      v.member = s.member;
      v.road = p.arrival.road;
      v.p = s.position;
      v.v = speed;
      v.mode = VehicleMode::kCarFollowing;
      add_vehicle(v);
    }
    pending = std::move(still);
  }

  void process_events() {
    // Entries and plans due now, in queue order; a platoon enters before it plans.
    struct Due {
      std::size_t index;
      int kind;  // 0 entry, 1 plan
    };
    std::vector<Due> due;
    while (next_arrival < platoons.size() && platoons[next_arrival].entry_step <= k) {
      due.push_back({next_arrival, 0});
      ++next_arrival;
    }
    if (optimal()) {
      for (std::size_t i = 0; i < platoons.size(); ++i) {
        const auto& p = platoons[i];
        if (!p.planned && p.plan_step == k && (p.spawned || p.entry_step <= k)) due.push_back({i, 1});
        if (p.entry_step > k) break;
      }
    }
    std::sort(due.begin(), due.end(), [](const Due& a, const Due& b) {
      return a.index != b.index ? a.index < b.index : a.kind < b.kind;
    });
    for (const Due& d : due) {
      PlatoonRuntime& p = platoons[d.index];
      if (d.kind == 0) {
        if (optimal()) {
          spawn_optimal(p);
        } else {
          queue_human_spawn(p);
        }
      } else {
        plan_platoon(p);
      }
    }
    if (!optimal()) try_human_spawns();
  }

  void detect_crossings() {
    const double t = now();
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
      VehicleState& v = vehicles[i];
      if (v.crossed_conflict || v.p < conflict) continue;
      v.crossed_conflict = true;
      const double p0 = prev_p[i];
      const double crossing = v.p == p0 ? t : t - dt + dt * (conflict - p0) / (v.p - p0);
      PlatoonRuntime& p = platoons[static_cast<std::size_t>(v.platoon_id)];
      if (v.member == 0) {
        p.leader_exited = true;
        p.observed_leader_exit = crossing;
        log(EventKind::kLeaderExit, crossing, p.id, v.id, std::string(to_string(p.arrival.road)),
            {{"planned_tf", p.planned ? p.exec_tf : kNaN}});
        if (p.plan_record >= 0) plans[static_cast<std::size_t>(p.plan_record)].observed_leader_exit = crossing;
      }
      if (v.member == p.arrival.size - 1) {
        p.fully_exited = true;
        p.observed_last_exit = crossing;
        ++n_completed;
        log(EventKind::kLastFollowerExit, crossing, p.id, v.id, std::string(to_string(p.arrival.road)));
        if (p.plan_record >= 0) plans[static_cast<std::size_t>(p.plan_record)].observed_last_exit = crossing;
        on_platoon_exit(p);
      }
    }
  }

  void on_platoon_exit(PlatoonRuntime& p) {
    if (optimal()) {
      // Hand every member over to car following.
      for (int j = 0; j < p.arrival.size; ++j) {
        if (VehicleState* m = member(p, j); m != nullptr && m->mode != VehicleMode::kCarFollowing) {
          transitions.push_back({now(), m->id, m->mode, VehicleMode::kCarFollowing, 0.0, 0.0});
          m->mode = VehicleMode::kCarFollowing;
        }
      }
      p.removal_pending = true;
    }
    // Exit headway against earlier completed platoons from the other road.
    const double t_h = prm.exit_headway;
    for (auto it = completed.rbegin(); it != completed.rend(); ++it) {
      const PlatoonRuntime& q = platoons[static_cast<std::size_t>(*it)];
      if (q.observed_last_exit < p.observed_leader_exit - kLateralMemory) break;
      if (q.arrival.road == p.arrival.road) continue;
      const double excess = std::min(t_h - (p.observed_leader_exit - q.observed_last_exit),
                                     t_h - (q.observed_leader_exit - p.observed_last_exit));
      if (optimal() && excess > kHeadwayTol) {
        step_violations.push_back({now(), "lateral", p.id, q.id, -1, -excess});
      }
    }
    completed.push_back(static_cast<int>(p.id));
  }

  void process_removals() {
    for (auto& p : platoons) {
      if (!p.removal_pending) continue;
      if (coordinator.remove_exited(p.id, now())) {
        p.removal_pending = false;
        log(EventKind::kRemoved, now(), p.id, -1, "");
      }
    }
  }

  // ---- human driving -----------------------------------------------------

  void update_gap_acceptance() {
    const auto& cf = config.human;
    std::vector<Kinematics> main_traffic;
    for (const auto& v : vehicles) {
      if (v.road == Road::kMain && v.p <= conflict) main_traffic.push_back({v.p, v.v});
    }
    for (auto& v : vehicles) {
      if (v.road != Road::kRamp || v.p >= conflict || v.committed) continue;
      if (conflict - v.p > cf.lookahead) {
        v.yielding = false;
        continue;
      }
      if (mode == SimMode::kBaseline2 && v.member > 0) {
        const VehicleState* prev = find_vehicle(v.id - 1);
        if (prev != nullptr && (prev->committed || prev->crossed_conflict) && prev->p - v.p <= kCohesionDistance) {
          v.committed = true;
          v.yielding = false;
          continue;
        }
      }
      const auto decision = yield_decision({v.p, v.v}, main_traffic, sc.geometry, cf);
      v.yielding = decision == YieldDecision::kYield;
      const double stopping = v.v * v.v / (2.0 * cf.comfortable_decel);
      if (!v.yielding && conflict - v.p <= std::max(stopping, cf.jam_distance + 1.0)) v.committed = true;
    }
  }

  struct Obstacle {
    Kinematics k;
    double length = 0.0;
    int vehicle_id = -1;  // -1 for the stop line
  };

  // Every obstacle `self` has to respect: the nearest one on its own path and,
  // near the merge, vehicles from the other road it gives way to or merges behind.
  std::vector<Obstacle> obstacles_for(const VehicleState& self) const {
    const double zone_start = conflict - config.human.lookahead;
    const bool human = !optimal();
    std::optional<Obstacle> nearest;
    std::vector<Obstacle> out;
    for (const auto& o : vehicles) {
      if (o.id == self.id || o.p <= self.p) continue;
      const Obstacle ob{{o.p, o.v}, prm.vehicle_length, o.id};
      if (o.p >= conflict || (self.p < conflict && o.road == self.road)) {
        if (!nearest || o.p < nearest->k.p) nearest = ob;
        continue;
      }
      if (self.p >= conflict || !human || self.p < zone_start || o.p < zone_start) continue;
      if (self.road == Road::kRamp && !self.yielding) out.push_back(ob);
      if (self.road == Road::kMain && (o.committed || !o.yielding)) out.push_back(ob);
    }
    if (nearest) out.push_back(*nearest);
    if (human && self.road == Road::kRamp && self.yielding && self.p < conflict) {
      out.push_back({{conflict, 0.0}, 0.0, -1});
    }
    return out;
  }

  double human_accel(const VehicleState& v) const {
    const Kinematics own{v.p, v.v};
    const auto obstacles = obstacles_for(v);
    if (obstacles.empty()) return car_following_accel(own, std::nullopt, 0.0, config.human, prm);
    double u = prm.u_max;
    for (const auto& ob : obstacles) {
      const bool formation = mode == SimMode::kBaseline2 && v.member > 0 && ob.vehicle_id == v.id - 1;
      const CarFollowingParams& cf = formation ? config.platoon_human : config.human;
      u = std::min(u, car_following_accel(own, ob.k, ob.length, cf, prm));
    }
    return u;
  }

  void compute_controls() {
    if (!optimal()) update_gap_acceptance();
    std::vector<double> controls(vehicles.size(), 0.0);
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
      const VehicleState& v = vehicles[i];
      if (v.mode == VehicleMode::kExecutingPlan) {
        controls[i] = v.u;
        continue;
      }
      if (v.mode != VehicleMode::kCarFollowing) continue;  // cruising
      if (optimal() && v.member > 0) {
        // Exited platoons stay rigid: members copy the foremost remaining member.
        const PlatoonRuntime& p = platoons[static_cast<std::size_t>(v.platoon_id)];
        const VehicleState* head = nullptr;
        for (int j = 0; j < v.member && head == nullptr; ++j) head = member_const(p, j);
        if (head != nullptr) {
          controls[i] = controls[static_cast<std::size_t>(head - vehicles.data())];
          continue;
        }
      }
      double u = human_accel(v);
      // Keep the speed inside [0, v_max] over the coming step.
      if (v.v + u * dt < 0.0) u = -v.v / dt;
      if (v.v <= prm.v_max && v.v + u * dt > prm.v_max) u = (prm.v_max - v.v) / dt;
      controls[i] = u;
    }
    for (std::size_t i = 0; i < vehicles.size(); ++i) vehicles[i].u = controls[i];
  }

  void record() {
    if (!options.record_trace) return;
    const double t = now();
    for (const auto& v : vehicles) {
      TraceRecord r;
      r.step = k;
      r.t = t;
      r.vehicle_id = v.id;
      r.platoon_id = v.platoon_id;
      r.member = v.member;
      r.road = v.road;
      r.mode = v.mode;
      r.p = v.p;
      r.v = v.v;
      r.u = v.u;
      r.fuel_rate = fuel_rate(v.v, v.u, config.fuel);
      trace.records.push_back(r);
    }
  }

  void integrate() {
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
      VehicleState& v = vehicles[i];
      prev_p[i] = v.p;
      if (v.mode == VehicleMode::kExecutingPlan) continue;
      const double cap = std::max(prm.v_max, v.v);  // above v_max only after a faulted plan
      v.v += v.u * dt;
      if (v.mode == VehicleMode::kCarFollowing) v.v = std::clamp(v.v, 0.0, cap);
      v.p += v.v * dt;
    }
  }

  std::vector<Violation> monitor() const {
    std::vector<Violation> out;
    const double t = now();
    for (const auto& v : vehicles) {
      const bool controlled = is_platoon_controlled(v.mode);
      const double v_lo = controlled ? prm.v_min : 0.0;
      if (v.u < prm.u_min - kBoundTol || v.u > prm.u_max + kBoundTol) {
        out.push_back({t, "u_bounds", v.platoon_id, -1, v.id,
                       v.u < prm.u_min ? v.u - prm.u_min : prm.u_max - v.u});
      }
      if (v.v < v_lo - kBoundTol || v.v > prm.v_max + kBoundTol) {
        out.push_back({t, "v_bounds", v.platoon_id, -1, v.id, v.v < v_lo ? v.v - v_lo : prm.v_max - v.v});
      }
    }

    if (optimal()) {
      // Rear-end between consecutive same-road platoons in the queue, and
      // formation gaps inside each platoon.
      const PlatoonRuntime* last_on_road[2] = {nullptr, nullptr};
      for (PlatoonId id : coordinator.queue()) {
        const PlatoonRuntime& p = platoons[static_cast<std::size_t>(id)];
        const int r = p.arrival.road == Road::kMain ? 0 : 1;
        const VehicleState* leader = find_vehicle(p.first_vehicle);
        if (const PlatoonRuntime* ahead = last_on_road[r]; ahead != nullptr && leader != nullptr &&
                                                          is_platoon_controlled(leader->mode)) {
          if (const VehicleState* tail = find_vehicle(ahead->first_vehicle + ahead->arrival.size - 1)) {
            const double margin = tail->p - leader->p - prm.safe_distance(leader->v);
            if (margin < -kGapTol) out.push_back({t, "rear_end", p.id, ahead->id, leader->id, margin});
          }
        }
        last_on_road[r] = &p;
        for (int j = 1; j < p.arrival.size; ++j) {
          const VehicleState* a = find_vehicle(p.first_vehicle + j - 1);
          const VehicleState* b = find_vehicle(p.first_vehicle + j);
          if (a == nullptr || b == nullptr || !is_platoon_controlled(a->mode) || !is_platoon_controlled(b->mode)) continue;
          const double margin = a->p - b->p - spacing;
          if (margin < -kGapTol) out.push_back({t, "intra_gap", p.id, -1, b->id, margin});
        }
      }
    }

    // Physical overlap on each approach and on the merged lane.
    std::vector<const VehicleState*> lanes[3];
    for (const auto& v : vehicles) {
      lanes[v.p >= conflict ? 2 : (v.road == Road::kMain ? 0 : 1)].push_back(&v);
    }
    for (auto& lane : lanes) {
      std::sort(lane.begin(), lane.end(), [](const VehicleState* a, const VehicleState* b) {
        return a->p != b->p ? a->p < b->p : a->id < b->id;
      });
      for (std::size_t i = 1; i < lane.size(); ++i) {
        const double margin = lane[i]->p - lane[i - 1]->p - prm.vehicle_length;
        if (margin <= -kGapTol) out.push_back({t, "overlap", lane[i - 1]->platoon_id, lane[i]->id, lane[i - 1]->id, margin});
      }
    }
    return out;
  }

  void step() {
    remove_departed();
    const double t = now();
    if (optimal()) {
      for (auto& p : platoons) {
        if (p.planned && !p.post_exit) update_executing(p, t);
      }
    }
    process_events();
    detect_crossings();
    if (optimal()) process_removals();
    compute_controls();
    record();

    std::vector<Violation> found = monitor();
    found.insert(found.end(), step_violations.begin(), step_violations.end());
    step_violations.clear();
    for (const auto& v : found) {
      log(EventKind::kViolation, v.t, v.platoon_id, v.vehicle_id, v.kind, {{"margin", v.margin}, {"other", v.other_id}});
    }
    violations.insert(violations.end(), found.begin(), found.end());

    integrate();
    ++k;
    if (!found.empty() && !options.audit_only) {
      std::ostringstream msg;
      msg << found.size() << " constraint violation(s) at t = " << t << ", first: " << found.front().kind
          << " (platoon " << found.front().platoon_id << ", margin " << found.front().margin << ")";
      throw MonitorViolationError(msg.str());
    }
  }
};

World::World(SimulationConfig config, SimMode mode, std::vector<ArrivalEvent> arrivals, RunOptions options)
    : impl_(std::make_unique<Impl>(std::move(config), mode, std::move(arrivals), std::move(options))) {}
World::~World() = default;
World::World(World&&) noexcept = default;
World& World::operator=(World&&) noexcept = default;

void World::step() { impl_->step(); }
std::vector<Violation> World::monitor_constraints() const { return impl_->monitor(); }
double World::time() const { return impl_->now(); }
std::int64_t World::step_index() const { return impl_->k; }
const std::vector<VehicleState>& World::vehicles() const { return impl_->vehicles; }
const SimTrace& World::trace() const { return impl_->trace; }
SimTrace World::take_trace() { return std::move(impl_->trace); }
const std::vector<Violation>& World::violations() const { return impl_->violations; }
const std::vector<PlanRecord>& World::plans() const { return impl_->plans; }
const std::vector<Transition>& World::transitions() const { return impl_->transitions; }
const Coordinator& World::coordinator() const { return impl_->coordinator; }
int World::platoons_completed() const { return impl_->n_completed; }
int World::platoons_in_network() const {
  int n = 0;
  for (const auto& p : impl_->platoons) n += p.spawned && !p.fully_exited;
  return n;
}

std::vector<ArrivalEvent> arrivals_for(const SimulationConfig& config) {
  if (!config.arrivals.empty()) return config.arrivals;
  return generate_arrivals(config.scenario);
}

RunResult run(const SimulationConfig& config, SimMode mode, const RunOptions& options) {
  return run(config, mode, arrivals_for(config), options);
}

RunResult run(const SimulationConfig& config, SimMode mode, std::vector<ArrivalEvent> arrivals,
              const RunOptions& options) {
  RunResult result;
  result.mode = mode;
  result.arrivals = arrivals;
  World world(config, mode, std::move(arrivals), options);
  const double horizon = config.scenario.horizon;
  if (horizon > 0.0) {
    const auto last = std::llround(horizon / config.scenario.dt_sim);
    try {
      while (world.step_index() <= last) world.step();
    } catch (const MonitorViolationError& e) {
      result.aborted = true;
      result.abort_reason = e.what();
    }
  }
  result.violations = world.violations();
  result.plans = world.plans();
  result.transitions = world.transitions();
  result.platoons_completed = world.platoons_completed();
  result.platoons_in_network = world.platoons_in_network();
  result.trace = world.take_trace();
  return result;
}

}  // namespace platoon_merge
