#pragma once

#include "hunt/geom.hpp"

namespace hunt {

/// Full kinematic state of the vehicle in the field frame.
struct VehicleState {
  Vec3 pos;
  Vec3 vel;
  Vec3 acc;
  double yaw = 0.0;  ///< radians, (-pi, pi]
};

}  // namespace hunt
