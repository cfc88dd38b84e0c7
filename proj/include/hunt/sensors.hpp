#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hunt/geom.hpp"
#include "hunt/state.hpp"
#include "hunt/target_filter.hpp"
#include "hunt/world_model.hpp"

namespace hunt {

/// splitmix64 finalizer over (seed, stream): cheap, well-mixed derivation of
/// independent engine seeds from one master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix_seed(seed, stream));
}

/// Yaw-mounted forward camera: field-of-view half-angles, a detection
/// probability that is certain out to a reliable range and decays linearly
/// to a floor at the maximum range, plus range/bearing noise magnitudes.
struct CameraModel {
  double fov_h = deg2rad(45.0);        ///< horizontal half-angle [rad]
  double fov_v = deg2rad(30.0);        ///< vertical half-angle [rad]
  double reliable_range = 24.0;        ///< [m] certain detection out to here
  double max_range = 44.5;             ///< [m] nothing is seen beyond
  double far_probability = 0.2;        ///< detection probability at max_range
  double range_noise_slope = 0.02;     ///< sigma = slope * range + floor
  double range_noise_floor = 0.1;      ///< [m]
  double angular_sigma = deg2rad(0.2); ///< bearing noise per axis [rad]
  double frame_rate = 30.0;            ///< [Hz]

  double range_sigma(double range) const {
    return range_noise_slope * range + range_noise_floor;
  }

  double detection_probability(double range) const {
    if (range <= reliable_range) return 1.0;
    if (range > max_range) return 0.0;
    const double f = (range - reliable_range) / (max_range - reliable_range);
    return 1.0 + (far_probability - 1.0) * f;
  }

  bool in_view(const VehicleState& vehicle, const Vec3& point) const {
    const Vec3 d = point - vehicle.pos;
    const double range = d.norm();
    if (range < 1e-9 || range > max_range) return false;
    const double az = wrap_angle(std::atan2(d.y, d.x) - vehicle.yaw);
    if (std::abs(az) > fov_h) return false;
    const double el = std::atan2(d.z, d.norm_xy());
    return std::abs(el) <= fov_v;
  }
};

/// Accumulates simulation time and fires once per sensor period.
class FrameClock {
 public:
  explicit FrameClock(double rate_hz) : period_(1.0 / rate_hz) {}

  bool advance(double dt) {
    accum_ += dt;
    if (accum_ + 1e-12 >= period_) {
      accum_ -= period_;
      return true;
    }
    return false;
  }

 private:
  double period_;
  double accum_ = 0.0;
};

/// Unit direction nudged by an isotropic two-axis Gaussian bearing error.
inline Vec3 perturb_direction(const Vec3& dir, double sigma,
                              std::mt19937_64& rng) {
  const Vec3 helper = std::abs(dir.z) < 0.9 ? Vec3{0.0, 0.0, 1.0}
                                            : Vec3{1.0, 0.0, 0.0};
  const Vec3 e1 = cross(dir, helper).normalized();
  const Vec3 e2 = cross(e1, dir);
  std::normal_distribution<double> n(0.0, sigma);
  const double a = n(rng);
  const double b = n(rng);
  return (dir + e1 * a + e2 * b).normalized();
}

/// Simulated balloon camera: one call per frame, emitting a noisy
/// origin/direction/range detection for each balloon that is in view and
/// survives the range-dependent detection draw.
class BalloonSensor {
 public:
  BalloonSensor(CameraModel camera, std::uint64_t seed,
                std::uint64_t stream = 1)
      : camera_(camera), clock_(camera.frame_rate),
        rng_(seeded_stream(seed, stream)) {}

  const CameraModel& camera() const { return camera_; }
  bool advance(double dt) { return clock_.advance(dt); }

  std::vector<BalloonDetection> sense(const VehicleState& vehicle,
                                      const std::vector<Vec3>& balloons,
                                      double now) {
    std::vector<BalloonDetection> out;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (const Vec3& b : balloons) {
      if (!camera_.in_view(vehicle, b)) continue;
      const Vec3 offset = b - vehicle.pos;
      const double range = offset.norm();
      if (coin(rng_) > camera_.detection_probability(range)) continue;
      BalloonDetection d;
      d.ray_origin = vehicle.pos;
      d.ray_direction =
          perturb_direction(offset / range, camera_.angular_sigma, rng_);
      d.range_estimate = range + unit(rng_) * camera_.range_sigma(range);
      d.timestamp = now;
      out.push_back(d);
    }
    return out;
  }

 private:
  CameraModel camera_;
  FrameClock clock_;
  std::mt19937_64 rng_;
};

/// Simulated target camera for the chase: sees the other copter and the
/// ball hanging on a line below it, reporting noisy positions, apparent
/// bounding-box heights, and range-derived confidences.
struct TargetSensorConfig {
  CameraModel camera;
  double hang_below = 1.5;     ///< [m] ball suspension length
  double copter_size = 0.6;    ///< [m] apparent copter height
  double ball_diameter = 0.13; ///< [m]
  double focal_px = 600.0;     ///< [px] pinhole focal length
};

class TargetSensor {
 public:
  TargetSensor(TargetSensorConfig config, std::uint64_t seed,
               std::uint64_t stream = 2)
      : config_(config), clock_(config.camera.frame_rate),
        rng_(seeded_stream(seed, stream)) {}

  const TargetSensorConfig& config() const { return config_; }
  bool advance(double dt) { return clock_.advance(dt); }

  std::vector<TargetDetection> sense(const VehicleState& vehicle,
                                     const Vec3& copter, double now) {
    std::vector<TargetDetection> out;
    sense_one(vehicle, copter, TargetDetection::Kind::copter,
              config_.copter_size, now, out);
    const Vec3 ball = copter - Vec3{0.0, 0.0, config_.hang_below};
    sense_one(vehicle, ball, TargetDetection::Kind::ball,
              config_.ball_diameter, now, out);
    return out;
  }

 private:
  void sense_one(const VehicleState& vehicle, const Vec3& object,
                 TargetDetection::Kind kind, double size, double now,
                 std::vector<TargetDetection>& out) {
    const CameraModel& cam = config_.camera;
    if (!cam.in_view(vehicle, object)) return;
    const Vec3 offset = object - vehicle.pos;
    const double range = offset.norm();
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::normal_distribution<double> unit(0.0, 1.0);
    const double p = cam.detection_probability(range);
    if (coin(rng_) > p) return;
    const Vec3 dir = perturb_direction(offset / range, cam.angular_sigma, rng_);
    const double r = range + unit(rng_) * cam.range_sigma(range);
    TargetDetection d;
    d.kind = kind;
    d.position = vehicle.pos + dir * r;
    d.confidence = p;
    d.bbox_height_px = config_.focal_px * size / range;
    d.timestamp = now;
    out.push_back(d);
  }

  TargetSensorConfig config_;
  FrameClock clock_;
  std::mt19937_64 rng_;
};

}  // namespace hunt
