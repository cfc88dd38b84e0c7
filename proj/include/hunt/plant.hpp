#pragma once

#include <cmath>

#include "hunt/control.hpp"
#include "hunt/state.hpp"

namespace hunt {

struct PlantConfig {
  double gravity = 9.81;
  double climb_lag = 0.15;  ///< climb-rate first-order time constant [s]; 0 = ideal
};

/// Triple-integrator vehicle model with the inverse attitude mapping:
/// tilt commands set the horizontal acceleration (a = g*tan(angle)) held
/// constant over the step, the climb rate tracks its command through a
/// first-order lag, and yaw integrates the commanded rate. All integrals
/// are exact for the piecewise-constant inputs.
inline VehicleState step_plant(const VehicleState& s, const AttitudeCommand& cmd,
                               double dt, const PlantConfig& cfg = {}) {
  VehicleState n = s;

  const double ax = cfg.gravity * std::tan(cmd.pitch);
  const double ay = cfg.gravity * std::tan(cmd.roll);
  n.pos.x += s.vel.x * dt + 0.5 * ax * dt * dt;
  n.pos.y += s.vel.y * dt + 0.5 * ay * dt * dt;
  n.vel.x += ax * dt;
  n.vel.y += ay * dt;
  n.acc.x = ax;
  n.acc.y = ay;

  if (cfg.climb_lag > 0.0) {
    // vz(t) = c + (vz0 - c) e^(-t/tau), integrated exactly for z
    const double c = cmd.climb_rate;
    const double tau = cfg.climb_lag;
    const double decay = std::exp(-dt / tau);
    n.vel.z = c + (s.vel.z - c) * decay;
    n.pos.z += c * dt + (s.vel.z - c) * tau * (1.0 - decay);
    n.acc.z = (c - n.vel.z) / tau;
  } else {
    n.vel.z = cmd.climb_rate;
    n.pos.z += cmd.climb_rate * dt;
    n.acc.z = 0.0;
  }

  n.yaw = wrap_angle(s.yaw + cmd.yaw_rate * dt);
  return n;
}

}  // namespace hunt
