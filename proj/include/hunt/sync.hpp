#pragma once

#include <algorithm>
#include <cmath>

#include "hunt/geom.hpp"
#include "hunt/state.hpp"
#include "hunt/trajectory.hpp"

namespace hunt {

/// Per-axis motion profiles sharing a single arrival time.
struct SyncPlan {
  MotionProfile x, y, z;
  double arrival_time = 0.0;

  const MotionProfile& axis(int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  MotionProfile& axis(int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

/// Sample all three axes of a synchronized plan at time t.
inline VehicleState sample(const SyncPlan& plan, double t) {
  VehicleState s;
  for (int i = 0; i < 3; ++i) {
    const AxisState a = sample(plan.axis(i), t);
    s.pos[i] = a.p;
    s.vel[i] = a.v;
    s.acc[i] = a.a;
  }
  return s;
}

/// Plan all three axes to arrive together: the slowest axis flies its
/// time-optimal profile and the others are re-timed to match. Axes whose
/// start already equals the goal get empty profiles. An axis ending at rest
/// that cannot be stretched the full way (see plan_fixed_time) is padded
/// with a hover segment, so it still holds its goal at arrival_time.
inline SyncPlan plan_synchronized(const VehicleState& start,
                                  const VehicleState& goal,
                                  const AxisLimits& limits_xy,
                                  const AxisLimits& limits_z) {
  SyncPlan plan;
  double optimal[3] = {0.0, 0.0, 0.0};
  bool moves[3] = {false, false, false};
  for (int i = 0; i < 3; ++i) {
    const AxisLimits& lim = i == 2 ? limits_z : limits_xy;
    const AxisState s0{start.pos[i], start.vel[i], start.acc[i]};
    const AxisState s1{goal.pos[i], goal.vel[i], goal.acc[i]};
    moves[i] = s0.p != s1.p || s0.v != s1.v || s0.a != s1.a;
    if (!moves[i]) {
      plan.axis(i).start = s0;
      continue;
    }
    plan.axis(i) = plan_time_optimal(s0, s1, lim);
    optimal[i] = plan.axis(i).duration();
  }
  plan.arrival_time = std::max({optimal[0], optimal[1], optimal[2]});

  for (int i = 0; i < 3; ++i) {
    if (!moves[i] || optimal[i] >= plan.arrival_time - 1e-9) continue;
    const AxisLimits& lim = i == 2 ? limits_z : limits_xy;
    const AxisState s1{goal.pos[i], goal.vel[i], goal.acc[i]};
    plan.axis(i) = plan_fixed_time(plan.axis(i), s1, lim, plan.arrival_time);
    const double gap = plan.arrival_time - plan.axis(i).duration();
    if (gap > 1e-6 && std::abs(s1.v) < 1e-12 && std::abs(s1.a) < 1e-12)
      plan.axis(i).segments.push_back({gap, 0.0});  // hover at the goal
  }
  return plan;
}

/// Proportional yaw-rate command toward target_yaw, taking the short way
/// around and clamped to rate_limit.
inline double yaw_rate(double current_yaw, double target_yaw, double gain,
                       double rate_limit) {
  const double raw = gain * wrap_angle(target_yaw - current_yaw);
  return std::clamp(raw, -rate_limit, rate_limit);
}

}  // namespace hunt
