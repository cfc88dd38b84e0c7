#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "hunt/geom.hpp"

namespace hunt {

/// Closed 3D figure-eight course (lemniscate with a twice-per-lap vertical
/// wave), traversed at constant ground speed. The curve parameter is
/// re-mapped through a cumulative arc-length table so position(t) moves at
/// `speed` regardless of local curvature.
class FigureEight {
 public:
  struct Params {
    Vec3 center{0.0, 0.0, 5.0};
    double half_length = 35.0;  ///< x extent [m]
    double half_width = 15.0;   ///< y extent [m]
    double z_amp = 2.0;         ///< vertical wave amplitude [m]
    double speed = 10.0;        ///< constant path speed [m/s]
    double phase = 0.0;         ///< start offset along the curve [rad]
  };

  FigureEight() : FigureEight(Params{}) {}

  explicit FigureEight(Params p) : p_(p) {
    double s = 0.0;
    table_[0] = 0.0;
    for (std::size_t i = 1; i <= kSteps; ++i) {
      const double u0 = kTwoPi * double(i - 1) / kSteps;
      const double u1 = kTwoPi * double(i) / kSteps;
      s += 0.5 * (tangent_norm(u0) + tangent_norm(u1)) * (u1 - u0);
      table_[i] = s;
    }
  }

  const Params& params() const { return p_; }
  double lap_length() const { return table_[kSteps]; }
  double lap_time() const { return lap_length() / p_.speed; }

  Vec3 position(double t) const { return point(u_at(t)); }

  /// Path tangent scaled to the configured speed.
  Vec3 velocity(double t) const {
    const double u = u_at(t);
    const Vec3 d = derivative(u);
    return d * (p_.speed / d.norm());
  }

 private:
  static constexpr std::size_t kSteps = 4096;
  static constexpr double kTwoPi = 2.0 * kPi;

  Vec3 point(double u) const {
    return p_.center + Vec3{p_.half_length * std::sin(u),
                            p_.half_width * std::sin(u) * std::cos(u),
                            p_.z_amp * std::sin(2.0 * u)};
  }
  Vec3 derivative(double u) const {
    return {p_.half_length * std::cos(u),
            p_.half_width * std::cos(2.0 * u),
            2.0 * p_.z_amp * std::cos(2.0 * u)};
  }
  double tangent_norm(double u) const { return derivative(u).norm(); }

  /// Invert arc length: curve parameter at travelled distance speed * t.
  double u_at(double t) const {
    const double total = lap_length();
    double s = std::fmod(p_.speed * t + p_.phase / kTwoPi * total, total);
    if (s < 0.0) s += total;
    // binary search for the table segment containing s
    std::size_t lo = 0, hi = kSteps;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (table_[mid] <= s)
        lo = mid;
      else
        hi = mid;
    }
    const double seg = table_[hi] - table_[lo];
    const double frac = seg > 0.0 ? (s - table_[lo]) / seg : 0.0;
    const double u_lo = kTwoPi * double(lo) / kSteps;
    double u = kTwoPi * (double(lo) + frac) / kSteps;
    // Newton-refine within the segment so the mapping is consistent with
    // the true arc length (the table alone leaves O(step) tangent error).
    for (int it = 0; it < 2; ++it) {
      const double s_est =
          table_[lo] + 0.5 * (tangent_norm(u_lo) + tangent_norm(u)) * (u - u_lo);
      u -= (s_est - s) / tangent_norm(u);
    }
    return u;
  }

  Params p_;
  std::array<double, kSteps + 1> table_{};
};

}  // namespace hunt
