#pragma once

#include <algorithm>
#include <cmath>

namespace hunt {

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double norm_xy() const { return std::sqrt(x * x + y * y); }

  Vec3 normalized() const {
    const double n = norm();
    return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{};
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}

/// Distance between two points projected onto the ground plane.
inline double ground_distance(const Vec3& a, const Vec3& b) {
  return (a - b).norm_xy();
}

/// Distance from point to the half-line {origin + t*dir, t >= 0}.
/// Points "behind" the origin clamp to the origin itself.
inline double point_ray_distance(const Vec3& point, const Vec3& origin,
                                 const Vec3& dir) {
  const Vec3 d = dir.normalized();
  const double t = std::max(0.0, (point - origin).dot(d));
  return (point - (origin + d * t)).norm();
}

/// Wrap an angle to (-pi, pi]; values at exactly -pi map to +pi.
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

}  // namespace hunt
