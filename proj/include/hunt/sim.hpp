#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "hunt/control.hpp"
#include "hunt/figure_eight.hpp"
#include "hunt/mission.hpp"
#include "hunt/plant.hpp"
#include "hunt/scenario.hpp"
#include "hunt/sensors.hpp"
#include "hunt/target_filter.hpp"
#include "hunt/world_model.hpp"

namespace hunt {

/// Run-time knobs that are not part of the scenario description itself.
struct SimOptions {
  bool record_trace = false;
  double pop_probability = 1.0;  ///< chance a hit radius crossing pops
  WorldModelParams world;        ///< association metric etc. for experiments
};

struct SimMetrics {
  std::string scenario;
  std::string kind;  // "hunt" or "chase"
  std::uint64_t seed = 0;
  int balloons = 0;
  std::vector<int> popped;        ///< per balloon, 0/1
  std::vector<int> tries;         ///< committed attempts per balloon
  std::vector<double> pop_times;  ///< [s]; -1 when never popped
  double total_s = 0.0;           ///< time of the last successful pop
  double duration_s = 0.0;        ///< simulated time at loop exit
  double distance_m = 0.0;        ///< path length flown
  int violations = 0;             ///< ticks spent outside the hard bounds
  int fence_warnings = 0;         ///< geofence clamp / masked-path warnings
  int infeasible_events = 0;      ///< controller degraded-mode activations
  double top_speed = 0.0;         ///< [m/s] peak ground speed
  int brake_entries = 0;          ///< chase only

  int pops() const {
    int n = 0;
    for (int p : popped) n += p;
    return n;
  }

  /// Stable, hand-formatted JSON (field order and float formatting are part
  /// of the reproducibility contract).
  std::string to_json() const {
    std::string out = "{\n";
    char buf[192];
    auto add = [&](const char* key, const std::string& value, bool comma) {
      out += "  \"";
      out += key;
      out += "\": ";
      out += value;
      out += comma ? ",\n" : "\n";
    };
    auto num = [&](const char* fmt, double v) {
      std::snprintf(buf, sizeof buf, fmt, v);
      return std::string(buf);
    };
    auto int_array = [&](const std::vector<int>& xs) {
      std::string s = "[";
      for (std::size_t i = 0; i < xs.size(); ++i) {
        s += std::to_string(xs[i]);
        if (i + 1 < xs.size()) s += ", ";
      }
      return s + "]";
    };
    auto time_array = [&](const std::vector<double>& xs) {
      std::string s = "[";
      for (std::size_t i = 0; i < xs.size(); ++i) {
        s += num("%.3f", xs[i]);
        if (i + 1 < xs.size()) s += ", ";
      }
      return s + "]";
    };
    add("scenario", "\"" + scenario + "\"", true);
    add("kind", "\"" + kind + "\"", true);
    add("seed", std::to_string(seed), true);
    add("balloons", std::to_string(balloons), true);
    add("popped", int_array(popped), true);
    add("tries", int_array(tries), true);
    add("pop_times_s", time_array(pop_times), true);
    add("total_s", num("%.3f", total_s), true);
    add("duration_s", num("%.3f", duration_s), true);
    add("distance_m", num("%.3f", distance_m), true);
    add("violations", std::to_string(violations), true);
    add("fence_warnings", std::to_string(fence_warnings), true);
    add("infeasible_events", std::to_string(infeasible_events), true);
    add("top_speed_mps", num("%.3f", top_speed), true);
    add("brake_entries", std::to_string(brake_entries), false);
    out += "}\n";
    return out;
  }
};

struct SimResult {
  SimMetrics metrics;
  std::string trace;  ///< CSV; empty unless requested
  std::vector<MonitorEvent> events;
};

namespace detail {

class TraceWriter {
 public:
  explicit TraceWriter(bool enabled) : enabled_(enabled) {
    if (enabled_)
      buf_ = "t,x,y,z,vx,vy,vz,yaw,pitch_cmd,roll_cmd,climb_cmd,"
             "fsm_state,n_hypotheses\n";
  }

  void row(double t, const VehicleState& v, const AttitudeCommand& c,
           const std::string& state, std::size_t hyps) {
    if (!enabled_) return;
    char line[320];
    std::snprintf(line, sizeof line,
                  "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,"
                  "%s,%lu\n",
                  t, v.pos.x, v.pos.y, v.pos.z, v.vel.x, v.vel.y, v.vel.z,
                  v.yaw, c.pitch, c.roll, c.climb_rate, state.c_str(),
                  static_cast<unsigned long>(hyps));
    buf_ += line;
  }

  std::string take() { return std::move(buf_); }

 private:
  bool enabled_;
  std::string buf_;
};

inline bool inside_hard_bounds(const Geofence& fence, const Vec3& p,
                               double tol) {
  // Ground operations below the corridor floor (takeoff, landing) are fine;
  // what counts is horizontal containment and the ceiling.
  return fence.rect.contains(p.x, p.y, tol) && p.z <= fence.z_max + tol;
}

inline int count_fence_warnings(const std::vector<MonitorEvent>& events) {
  int n = 0;
  for (const MonitorEvent& e : events)
    if (e.kind == MonitorEvent::Kind::warning &&
        (e.detail.find("geofence") != std::string::npos ||
         e.detail.find("masked") != std::string::npos))
      ++n;
  return n;
}

}  // namespace detail

/// Closed-loop balloon-hunt run: sense at the camera rate, update the world
/// model, let the mission drive waypoints, fly the plant at the control
/// rate, and pop true balloons on close fast passes.
inline SimResult run_hunt(const Scenario& scenario,
                          const SimOptions& options = {}) {
  SimResult result;
  SimMetrics& m = result.metrics;
  m.scenario = scenario.name;
  m.kind = "hunt";
  m.seed = scenario.seed;
  m.balloons = static_cast<int>(scenario.balloons.size());
  m.popped.assign(scenario.balloons.size(), 0);
  m.tries.assign(scenario.balloons.size(), 0);
  m.pop_times.assign(scenario.balloons.size(), -1.0);

  VehicleState vehicle;
  vehicle.pos = scenario.start;

  WorldModel world(options.world);
  BalloonMission mission(scenario.mission, scenario.fence);
  BalloonSensor sensor(scenario.camera, scenario.seed, 1);
  std::mt19937_64 pop_rng = seeded_stream(scenario.seed, 7);
  std::uniform_real_distribution<double> pop_coin(0.0, 1.0);

  PositionController controller;  // stock horizontal/vertical limits
  double now = 0.0;
  controller.on_event = [&](const std::string& detail) {
    mission.runner().warn(now, detail);
    ++m.infeasible_events;
  };

  detail::TraceWriter trace(options.record_trace);
  std::vector<char> alive(scenario.balloons.size(), 1);
  std::vector<char> in_radius(scenario.balloons.size(), 0);

  const double dt = scenario.tick;
  while (now < scenario.duration_cap && !mission.done()) {
    if (sensor.advance(dt)) {
      std::vector<Vec3> visible;
      for (std::size_t i = 0; i < scenario.balloons.size(); ++i)
        if (alive[i]) visible.push_back(scenario.balloons[i]);
      for (const BalloonDetection& d : sensor.sense(vehicle, visible, now))
        world.ingest(d);
      world.end_frame([&](const Vec3& p) {
        return scenario.camera.in_view(vehicle, p);
      });
    }

    const WaypointCommand wp = mission.tick(now, vehicle, world);
    if (!wp.active) break;
    const AttitudeCommand cmd = controller.step(vehicle, wp.target);
    trace.row(now, vehicle, cmd, mission.runner().current(),
              world.hypotheses().size());

    const VehicleState next = step_plant(vehicle, cmd, dt);
    m.distance_m += (next.pos - vehicle.pos).norm();
    vehicle = next;
    now += dt;

    const double ground_speed = vehicle.vel.norm_xy();
    m.top_speed = std::max(m.top_speed, ground_speed);
    if (!detail::inside_hard_bounds(scenario.fence, vehicle.pos, 0.3))
      ++m.violations;

    for (std::size_t i = 0; i < scenario.balloons.size(); ++i) {
      if (!alive[i]) continue;
      const bool close =
          ground_distance(vehicle.pos, scenario.balloons[i]) <=
          scenario.mission.pop_radius;
      if (close && !in_radius[i] && ground_speed >= 1.0 &&
          pop_coin(pop_rng) <= options.pop_probability) {
        alive[i] = 0;
        m.popped[i] = 1;
        m.pop_times[i] = now;
        m.total_s = std::max(m.total_s, now);
      }
      in_radius[i] = close ? 1 : 0;
    }
  }

  m.duration_s = now;
  // committed attempts, credited to the nearest true balloon
  for (const BalloonMission::Attempt& a : mission.attempts()) {
    int best = -1;
    double best_d = 1e18;
    for (std::size_t i = 0; i < scenario.balloons.size(); ++i) {
      const double d = ground_distance(a.target, scenario.balloons[i]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) ++m.tries[best];
  }

  result.events = mission.runner().drain_events();
  m.fence_warnings = detail::count_fence_warnings(result.events);
  result.trace = trace.take();
  return result;
}

/// Closed-loop chase run: the target copter flies the lemniscate course
/// with the ball hanging below it; the chaser tracks the ball with the
/// constant-velocity filter, leads it, and brakes short of the fence.
inline SimResult run_chase(const Scenario& scenario,
                           const SimOptions& options = {}) {
  SimResult result;
  SimMetrics& m = result.metrics;
  m.scenario = scenario.name;
  m.kind = "chase";
  m.seed = scenario.seed;

  VehicleState vehicle;
  vehicle.pos = scenario.start;

  const FigureEight course(scenario.chase.course);
  ChaseMission mission(scenario.chase.mission, scenario.fence);
  TargetSensor sensor(scenario.chase.sensor, scenario.seed, 2);

  ControllerConfig cc;
  cc.limits_xy = AxisLimits::symmetric(scenario.chase.v_max, 4.0, 5.0);
  PositionController controller(cc);
  double now = 0.0;
  controller.on_event = [&](const std::string& detail) {
    mission.runner().warn(now, detail);
    ++m.infeasible_events;
  };

  detail::TraceWriter trace(options.record_trace);
  std::optional<TargetEstimate> estimate;
  std::optional<TargetEstimate> copter_gate;
  double last_update = -1e9;

  const double dt = scenario.tick;
  while (now < scenario.duration_cap) {
    std::optional<Vec3> measurement;
    if (sensor.advance(dt)) {
      const Vec3 copter = course.position(now);
      std::vector<TargetDetection> copters, balls;
      for (const TargetDetection& d : sensor.sense(vehicle, copter, now)) {
        (d.kind == TargetDetection::Kind::copter ? copters : balls)
            .push_back(d);
      }
      const Selection sel = select(copters, balls, copter_gate, estimate);
      if (sel.copter) copter_gate = make_estimate(sel.copter->position);
      if (sel.ball) {
        measurement = sel.ball->position;
        last_update = now;
      }
    }

    if (!estimate && measurement) {
      estimate = make_estimate(*measurement);
    } else if (estimate) {
      *estimate = ekf_step(*estimate, dt, measurement);
    }
    if (estimate && now - last_update > 1.0) {
      estimate.reset();  // track lost: fall back to the corner wait
      copter_gate.reset();
    }

    const WaypointCommand wp = mission.tick(now, vehicle, estimate);
    const AttitudeCommand cmd = controller.step(vehicle, wp.target);
    trace.row(now, vehicle, cmd, mission.runner().current(),
              estimate ? 1 : 0);

    const VehicleState next = step_plant(vehicle, cmd, dt);
    m.distance_m += (next.pos - vehicle.pos).norm();
    vehicle = next;
    now += dt;

    m.top_speed = std::max(m.top_speed, vehicle.vel.norm_xy());
    if (!detail::inside_hard_bounds(scenario.fence, vehicle.pos, 0.3))
      ++m.violations;
  }

  m.duration_s = now;
  result.events = mission.runner().drain_events();
  m.fence_warnings = detail::count_fence_warnings(result.events);
  for (const MonitorEvent& e : result.events)
    if (e.kind == MonitorEvent::Kind::entered && e.state == "Brake")
      ++m.brake_entries;
  result.trace = trace.take();
  return result;
}

inline SimResult run_scenario(const Scenario& scenario,
                              const SimOptions& options = {}) {
  return scenario.kind == Scenario::Kind::chase ? run_chase(scenario, options)
                                                : run_hunt(scenario, options);
}

}  // namespace hunt
