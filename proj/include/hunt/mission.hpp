#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hunt/fsm.hpp"
#include "hunt/geom.hpp"
#include "hunt/state.hpp"
#include "hunt/target_filter.hpp"
#include "hunt/world_model.hpp"

namespace hunt {

struct Rect {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;

  bool valid() const { return x_min < x_max && y_min < y_max; }
  bool contains(double x, double y, double tol = 0.0) const {
    return x >= x_min - tol && x <= x_max + tol && y >= y_min - tol &&
           y <= y_max + tol;
  }
  double cx() const { return 0.5 * (x_min + x_max); }
  double cy() const { return 0.5 * (y_min + y_max); }
};

/// Allowed-flight region: an axis-aligned rectangle with an altitude
/// corridor, optionally minus a rectangular masked bite (the stand-in for a
/// non-convex arena boundary). Commands are clamped inside.
struct Geofence {
  Rect rect;
  double z_min = 0.0, z_max = 10.0;
  std::optional<Rect> mask;  ///< forbidden sub-rectangle, if any

  bool valid() const {
    return rect.valid() && z_min < z_max &&
           (!mask || (mask->valid() && rect.contains(mask->cx(), mask->cy())));
  }

  bool contains(const Vec3& p, double tol = 0.0) const {
    if (!rect.contains(p.x, p.y, tol)) return false;
    if (p.z < z_min - tol || p.z > z_max + tol) return false;
    if (mask && mask->contains(p.x, p.y, -tol)) return false;
    return true;
  }

  /// Nearest allowed point: clamp into the rectangle and corridor, then
  /// push out of the mask through its closest side (with a small margin).
  Vec3 clamp(const Vec3& p) const {
    Vec3 c{std::clamp(p.x, rect.x_min, rect.x_max),
           std::clamp(p.y, rect.y_min, rect.y_max),
           std::clamp(p.z, z_min, z_max)};
    if (mask && mask->contains(c.x, c.y)) {
      const double margin = 0.1;
      const double push[4] = {c.x - mask->x_min, mask->x_max - c.x,
                              c.y - mask->y_min, mask->y_max - c.y};
      int side = 0;
      for (int i = 1; i < 4; ++i)
        if (push[i] < push[side]) side = i;
      switch (side) {
        case 0: c.x = mask->x_min - margin; break;
        case 1: c.x = mask->x_max + margin; break;
        case 2: c.y = mask->y_min - margin; break;
        case 3: c.y = mask->y_max + margin; break;
      }
      c.x = std::clamp(c.x, rect.x_min, rect.x_max);
      c.y = std::clamp(c.y, rect.y_min, rect.y_max);
    }
    return c;
  }

  /// Does the straight ground-plane segment a->b cross the masked region?
  bool segment_crosses_mask(const Vec3& a, const Vec3& b) const {
    if (!mask) return false;
    // Liang-Barsky clip of the segment against the mask rectangle.
    double t0 = 0.0, t1 = 1.0;
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - mask->x_min, mask->x_max - a.x,
                         a.y - mask->y_min, mask->y_max - a.y};
    for (int i = 0; i < 4; ++i) {
      if (p[i] == 0.0) {
        if (q[i] < 0.0) return false;  // parallel and outside
        continue;
      }
      const double r = q[i] / p[i];
      if (p[i] < 0.0)
        t0 = std::max(t0, r);
      else
        t1 = std::min(t1, r);
      if (t0 > t1) return false;
    }
    return true;
  }
};

struct MissionParams {
  enum class Strategy { direct, star };

  double search_speed = 5.0;     ///< [m/s] cruise during search (the planner's
                                 ///< horizontal velocity limit is set to this)
  double search_altitude = 4.0;  ///< [m]
  double lane_inset = 10.0;      ///< [m] lane turn points inset from the fence
  double lane_spacing = 20.0;    ///< [m] between adjacent lanes
  double approach_behind = 2.0;  ///< [m] approach point offset behind target
  double approach_above = 0.7;   ///< [m] and above it
  double exit_past = 3.0;        ///< [m] exit point beyond the target center
  double flythrough_speed = 2.0; ///< [m/s] floor when crossing the target
  double pop_radius = 0.5;       ///< [m] ground distance that counts as a hit
  double reach_h = 1.0;          ///< [m] waypoint-reached radius, horizontal
  double reach_v = 0.5;          ///< [m] and vertical
  int confirm_ticks = 3;         ///< debounce before committing to a target
  Strategy strategy = Strategy::direct;
};

/// One commanded setpoint for the position controller.
struct WaypointCommand {
  VehicleState target;  ///< position + yaw; velocity/acceleration zero
  bool active = true;   ///< false once the mission is over
};

/// Balloon-hunt mission: climb, sweep the arena in creeping lanes, and on a
/// debounced confirmed hypothesis fly a straight line through it (approach
/// point behind and above, then a carrot tracked along the line to an exit
/// point past the center), declaring the pop by ground distance to the live
/// hypothesis. The star strategy returns to the field center after every
/// attempt; direct goes straight back to searching. Lost targets cancel the
/// attempt. All emitted waypoints are geofence-clamped.
class BalloonMission {
 public:
  struct Attempt {
    Vec3 target;
    double committed_at = 0.0;  ///< fly-through leg started
    bool popped = false;
    double resolved_at = 0.0;
  };

  static StateGraph graph() {
    StateGraph g;
    g.initial = "Takeoff";
    g.successors = {{"Takeoff", {"Search"}},
                    {"Search", {"Pop", "Land"}},
                    {"Pop", {"ReturnToCenter", "Search"}},
                    {"ReturnToCenter", {"Search"}},
                    {"Land", {}}};
    return g;
  }

  BalloonMission(MissionParams params, Geofence fence)
      : params_(params), fence_(fence), runner_(graph()) {
    center_ = {fence_.rect.cx(), fence_.rect.cy(), params_.search_altitude};
    build_lanes();
    runner_.on("Takeoff", [this](double) { return takeoff_step(); });
    runner_.on("Search", [this](double) { return search_step(); });
    runner_.on("Pop", [this](double) { return pop_step(); });
    runner_.on("ReturnToCenter", [this](double) { return rtc_step(); });
    // Land is passive: terminal, no waypoint.
  }

  const MissionParams& params() const { return params_; }
  FsmRunner& runner() { return runner_; }
  const std::vector<Attempt>& attempts() const { return attempts_; }
  bool done() const { return done_; }

  WaypointCommand tick(double now, const VehicleState& vehicle,
                       WorldModel& world) {
    now_ = now;
    vehicle_ = vehicle;
    world_ = &world;
    if (!runner_.started()) {
      runner_.start(now);
      takeoff_spot_ = vehicle.pos;
    }
    runner_.tick(now);
    world_ = nullptr;

    WaypointCommand cmd;
    const std::string& state = runner_.current();
    if (state == "Takeoff") {
      cmd.target.pos = {takeoff_spot_.x, takeoff_spot_.y,
                        params_.search_altitude};
      cmd.target.yaw = vehicle.yaw;
    } else if (state == "Search") {
      cmd.target.pos = lanes_[std::min(lane_idx_, lanes_.size() - 1)];
      cmd.target.yaw = yaw_towards(cmd.target.pos);
    } else if (state == "Pop") {
      cmd.target.pos = committed_ ? flythrough_waypoint() : approach_point_;
      cmd.target.yaw = std::atan2(axis_.y, axis_.x);
    } else if (state == "ReturnToCenter") {
      cmd.target.pos = center_;
      cmd.target.yaw = yaw_towards(center_);
    } else {  // Land: hold position, mission over
      done_ = true;
      cmd.target.pos = vehicle.pos;
      cmd.target.yaw = vehicle.yaw;
      cmd.active = false;
    }
    if (cmd.active) cmd.target.pos = fenced(cmd.target.pos);
    return cmd;
  }

 private:
  // --- waypoint plumbing -------------------------------------------------

  void build_lanes() {
    const Rect& r = fence_.rect;
    const double x0 = r.x_min + params_.lane_inset;
    const double x1 = r.x_max - params_.lane_inset;
    const double y0 = r.y_min + params_.lane_inset;
    const double y1 = r.y_max - params_.lane_inset;
    const double z = params_.search_altitude;
    // creeping line: sweep long legs in x, stepping lanes in y
    bool forward = true;
    for (double y = y0; y <= y1 + 1e-9; y += params_.lane_spacing) {
      if (forward) {
        lanes_.push_back({x0, y, z});
        lanes_.push_back({x1, y, z});
      } else {
        lanes_.push_back({x1, y, z});
        lanes_.push_back({x0, y, z});
      }
      forward = !forward;
    }
  }

  bool reached(const Vec3& wp) const {
    return ground_distance(vehicle_.pos, wp) <= params_.reach_h &&
           std::abs(vehicle_.pos.z - wp.z) <= params_.reach_v;
  }

  double yaw_towards(const Vec3& wp) const {
    const double dx = wp.x - vehicle_.pos.x, dy = wp.y - vehicle_.pos.y;
    if (dx * dx + dy * dy < 1.0) return vehicle_.yaw;
    return std::atan2(dy, dx);
  }

  /// Waypoint for the committed fly-through leg: a short carrot on the run
  /// line rather than the exit point itself. Planning all the way to the
  /// exit lets the per-axis profiles bow off the line whenever the entry
  /// velocity is misaligned with it; a carrot a couple of meters ahead
  /// keeps the track on the line, and because the tracker plans to rest at
  /// the carrot, the speed settles near the value whose stopping distance
  /// equals the lookahead -- above the crossing-speed floor for the stock
  /// limits.
  Vec3 flythrough_waypoint() const {
    const double lookahead = 1.25 * params_.flythrough_speed;
    const double s = (vehicle_.pos.x - target_.x) * axis_.x +
                     (vehicle_.pos.y - target_.y) * axis_.y;
    if (s + lookahead >= params_.exit_past) return exit_point_;
    Vec3 wp = target_ + (s + lookahead) * axis_;
    wp.z = exit_point_.z;
    return wp;
  }

  /// Clamp a waypoint into the fence; emit one warning per new violation.
  Vec3 fenced(const Vec3& wp) {
    const Vec3 c = fence_.clamp(wp);
    const bool moved = (c - wp).norm() > 1e-9;
    const bool crosses = fence_.segment_crosses_mask(vehicle_.pos, c);
    if ((moved || crosses) && (c - last_warned_).norm() > 1e-9) {
      last_warned_ = c;
      runner_.warn(now_, moved ? "geofence clamp" : "path crosses masked region");
    }
    return c;
  }

  // --- state behaviors ---------------------------------------------------

  std::string takeoff_step() {
    const Vec3 wp{takeoff_spot_.x, takeoff_spot_.y, params_.search_altitude};
    return reached(wp) ? "Search" : "Takeoff";
  }

  std::string search_step() {
    if (lane_idx_ < lanes_.size() && reached(lanes_[lane_idx_])) ++lane_idx_;
    if (lane_idx_ >= lanes_.size()) return "Land";

    const auto confirmed = world_->confirmed(vehicle_.pos);
    if (confirmed.empty()) {
      debounce_ = 0;
      return "Search";
    }
    const Vec3 nearest = confirmed.front();
    if (debounce_ > 0 && ground_distance(nearest, debounce_target_) <= 1.0)
      ++debounce_;
    else
      debounce_ = 1;
    debounce_target_ = nearest;
    if (debounce_ < params_.confirm_ticks) return "Search";

    begin_attempt(nearest);
    return "Pop";
  }

  void begin_attempt(const Vec3& target) {
    target_ = target;
    debounce_ = 0;
    committed_ = false;
    Vec3 axis = target - vehicle_.pos;
    axis.z = 0.0;
    const double n = axis.norm();
    axis_ = n > 1e-9 ? axis / n : Vec3{1.0, 0.0, 0.0};
    approach_point_ = target - params_.approach_behind * axis_ +
                      Vec3{0.0, 0.0, params_.approach_above};
    exit_point_ = target + params_.exit_past * axis_;
    exit_point_.z = params_.search_altitude;
  }

  std::string pop_step() {
    const std::string after =
        params_.strategy == MissionParams::Strategy::star ? "ReturnToCenter"
                                                          : "Search";
    if (!committed_) {
      // approach leg: the target may evaporate (filter merged or lost it)
      const auto live = live_target();
      if (!live) {
        runner_.warn(now_, "target lost, attempt canceled");
        return after;
      }
      if (reached(approach_point_)) {
        // Re-aim the fly-through line at the freshest estimate: the filter
        // has kept refining the hypothesis since the attempt began, and the
        // reach radius lets the vehicle sit up to a meter off the original
        // line. Aiming from where we actually are puts the pass directly
        // over the target. Clamping the exit here (not just at emission)
        // keeps the leg's end condition inside the fence too.
        committed_ = true;
        target_ = *live;
        Vec3 axis = target_ - vehicle_.pos;
        axis.z = 0.0;
        const double n = axis.norm();
        if (n > 1e-9) axis_ = axis / n;
        exit_point_ = target_ + params_.exit_past * axis_;
        exit_point_.z = params_.search_altitude;
        exit_point_ = fenced(exit_point_);
        attempts_.push_back({target_, now_, false, 0.0});
      }
      return "Pop";
    }
    // committed fly-through leg: the hit test is against the live
    // hypothesis, not the commit-time snapshot of it
    if (world_->remove_popped(vehicle_.pos, params_.pop_radius)) {
      attempts_.back().popped = true;
      attempts_.back().resolved_at = now_;
      return after;
    }
    if (reached(exit_point_)) {  // flew past without the hit registering
      attempts_.back().resolved_at = now_;
      return after;
    }
    return "Pop";
  }

  /// The confirmed hypothesis currently matching the attempt's target, if
  /// the filter still holds one within the association gate.
  std::optional<Vec3> live_target() const {
    std::optional<Vec3> best;
    double best_d = 1.5;
    for (const Vec3& p : world_->confirmed(vehicle_.pos)) {
      const double d = ground_distance(p, target_);
      if (d <= best_d) {
        best_d = d;
        best = p;
      }
    }
    return best;
  }

  std::string rtc_step() { return reached(center_) ? "Search" : "ReturnToCenter"; }

  MissionParams params_;
  Geofence fence_;
  FsmRunner runner_;

  // per-tick context
  double now_ = 0.0;
  VehicleState vehicle_;
  WorldModel* world_ = nullptr;

  // mission state
  Vec3 takeoff_spot_;
  Vec3 center_;
  std::vector<Vec3> lanes_;
  std::size_t lane_idx_ = 0;
  int debounce_ = 0;
  Vec3 debounce_target_;
  Vec3 target_, axis_, approach_point_, exit_point_;
  bool committed_ = false;
  std::vector<Attempt> attempts_;
  Vec3 last_warned_{1e18, 1e18, 1e18};
  bool done_ = false;
};

/// Ball-chase mission: wait on a corner facing the field, chase the
/// predicted ball position while it is tracked, and brake whenever the
/// stopping distance at the current speed would overrun the fence.
class ChaseMission {
 public:
  struct Params {
    Vec3 corner{0.0, 0.0, 4.0};   ///< hold point
    double lookahead = 0.6;       ///< [s] lead on the ball estimate
    double a_max = 4.0;           ///< [m/s^2] braking authority
    double brake_margin = 1.0;    ///< [m] fence standoff
    double resume_speed = 1.0;    ///< [m/s] below this Brake hands back
  };

  static StateGraph graph() {
    StateGraph g;
    g.initial = "WaitAtCorner";
    g.successors = {{"WaitAtCorner", {"Chase"}},
                    {"Chase", {"Brake", "WaitAtCorner"}},
                    {"Brake", {"Chase", "WaitAtCorner"}}};
    return g;
  }

  ChaseMission(Params params, Geofence fence)
      : params_(params), fence_(fence), runner_(graph()) {
    runner_.on("WaitAtCorner",
               [this](double) { return ball_ ? "Chase" : "WaitAtCorner"; });
    runner_.on("Chase", [this](double) {
      if (must_brake()) return "Brake";
      return ball_ ? "Chase" : "WaitAtCorner";
    });
    runner_.on("Brake", [this](double) {
      if (speed() > params_.resume_speed) return "Brake";
      return ball_ ? "Chase" : "WaitAtCorner";
    });
  }

  FsmRunner& runner() { return runner_; }

  WaypointCommand tick(double now, const VehicleState& vehicle,
                       const std::optional<TargetEstimate>& ball) {
    vehicle_ = vehicle;
    ball_ = ball;
    if (!runner_.started()) runner_.start(now);
    runner_.tick(now);

    WaypointCommand cmd;
    const std::string& state = runner_.current();
    if (state == "WaitAtCorner") {
      cmd.target.pos = params_.corner;
      cmd.target.yaw = std::atan2(fence_.rect.cy() - params_.corner.y,
                                  fence_.rect.cx() - params_.corner.x);
    } else if (state == "Chase") {
      const Vec3 predicted =
          ball_->position + params_.lookahead * ball_->velocity;
      cmd.target.pos = predicted;
      cmd.target.yaw = yaw_towards(predicted);
    } else {  // Brake: stop straight ahead, inside the fence
      Vec3 v = vehicle_.vel;
      v.z = 0.0;
      const double sp = v.norm();
      const Vec3 dir = sp > 1e-9 ? v / sp : Vec3{1.0, 0.0, 0.0};
      cmd.target.pos =
          vehicle_.pos + dir * (sp * sp / (2.0 * params_.a_max));
      cmd.target.pos.z = vehicle_.pos.z;
      cmd.target.yaw = vehicle_.yaw;
    }
    cmd.target.pos = fence_.clamp(cmd.target.pos);
    return cmd;
  }

 private:
  double speed() const {
    Vec3 v = vehicle_.vel;
    v.z = 0.0;
    return v.norm();
  }

  double yaw_towards(const Vec3& wp) const {
    const double dx = wp.x - vehicle_.pos.x, dy = wp.y - vehicle_.pos.y;
    if (dx * dx + dy * dy < 1.0) return vehicle_.yaw;
    return std::atan2(dy, dx);
  }

  /// Stopping distance at the current speed vs. room left along the
  /// velocity direction before the fence (minus the margin).
  bool must_brake() const {
    Vec3 v = vehicle_.vel;
    v.z = 0.0;
    const double sp = v.norm();
    if (sp < 1e-6) return false;
    const Vec3 dir = v / sp;
    double room = 1e18;
    if (dir.x > 1e-12)
      room = std::min(room, (fence_.rect.x_max - vehicle_.pos.x) / dir.x);
    if (dir.x < -1e-12)
      room = std::min(room, (fence_.rect.x_min - vehicle_.pos.x) / dir.x);
    if (dir.y > 1e-12)
      room = std::min(room, (fence_.rect.y_max - vehicle_.pos.y) / dir.y);
    if (dir.y < -1e-12)
      room = std::min(room, (fence_.rect.y_min - vehicle_.pos.y) / dir.y);
    return sp * sp / (2.0 * params_.a_max) > room - params_.brake_margin;
  }

  Params params_;
  Geofence fence_;
  FsmRunner runner_;
  VehicleState vehicle_;
  std::optional<TargetEstimate> ball_;
};

}  // namespace hunt
