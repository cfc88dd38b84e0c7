#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "hunt/state.hpp"
#include "hunt/sync.hpp"
#include "hunt/trajectory.hpp"

namespace hunt {

/// Attitude-level command understood by the vehicle (and the sim plant).
struct AttitudeCommand {
  double pitch = 0.0;       ///< radians; positive pitch accelerates +x
  double roll = 0.0;        ///< radians; positive roll accelerates +y
  double climb_rate = 0.0;  ///< m/s, commanded vertical velocity
  double yaw_rate = 0.0;    ///< rad/s
};

struct ControllerConfig {
  AxisLimits limits_xy = AxisLimits::horizontal();
  AxisLimits limits_z = AxisLimits::vertical();
  double tick = 0.02;                 ///< control period [s]
  double tilt_limit = 35.0 * kPi / 180.0;
  double gravity = 9.81;
  double yaw_gain = 1.5;              ///< 1/s
  double yaw_rate_limit = 1.0;        ///< rad/s
  /// Lead horizon [s] inverting the vehicle's first-order climb-rate lag:
  /// the climb command is the planned velocity plus this much of the
  /// planned acceleration, so the lagged response lands on the plan.
  double climb_lead = 0.15;
};

/// Map a horizontal acceleration to the tilt angle that produces it.
inline double tilt_from_accel(double accel, double gravity) {
  return std::atan2(accel, gravity);
}

/// Closed-loop position controller: re-plans the synchronized trajectory
/// from the current state every tick and extracts the first move as an
/// attitude command. Stateless between calls apart from the event sink.
class PositionController {
 public:
  explicit PositionController(ControllerConfig cfg = {}) : cfg_(cfg) {}

  const ControllerConfig& config() const { return cfg_; }

  /// Event sink for degraded-mode notifications (unset = silent).
  std::function<void(const std::string&)> on_event;

  AttitudeCommand step(const VehicleState& now, const VehicleState& target) {
    AttitudeCommand cmd;
    cmd.yaw_rate =
        yaw_rate(now.yaw, target.yaw, cfg_.yaw_gain, cfg_.yaw_rate_limit);
    try {
      const SyncPlan plan =
          plan_synchronized(now, target, cfg_.limits_xy, cfg_.limits_z);
      const VehicleState next = sample(plan, cfg_.tick);
      cmd.pitch = std::clamp(tilt_from_accel(next.acc.x, cfg_.gravity),
                             -cfg_.tilt_limit, cfg_.tilt_limit);
      cmd.roll = std::clamp(tilt_from_accel(next.acc.y, cfg_.gravity),
                            -cfg_.tilt_limit, cfg_.tilt_limit);
      cmd.climb_rate =
          std::clamp(next.vel.z + cfg_.climb_lead * next.acc.z,
                     cfg_.limits_z.v_min, cfg_.limits_z.v_max);
    } catch (const InfeasibleGoal& e) {
      // unreachable target: hold hover and let the mission layer know
      cmd.pitch = 0.0;
      cmd.roll = 0.0;
      cmd.climb_rate = 0.0;
      if (on_event) on_event(std::string("infeasible goal: ") + e.what());
    }
    return cmd;
  }

 private:
  ControllerConfig cfg_;
};

}  // namespace hunt
