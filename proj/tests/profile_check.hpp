#pragma once

// Test-side validity checker for motion profiles: verifies jerk bounds,
// acceleration/velocity envelopes (including interior extrema), and terminal
// state accuracy by direct integration — no planner internals involved.

#include <cmath>
#include <string>

#include "hunt/trajectory.hpp"

namespace profile_check {

struct Result {
  bool ok = true;
  std::string why;
  hunt::AxisState end;
};

inline Result check(const hunt::MotionProfile& prof,
                    const hunt::AxisLimits& lim, const hunt::AxisState& goal,
                    double term_tol = 1e-6) {
  Result r;
  auto fail = [&](const std::string& w) {
    r.ok = false;
    if (!r.why.empty()) r.why += "; ";
    r.why += w;
  };

  const double vtol = 1e-6, atol = 1e-6, jtol = 1e-9;
  hunt::AxisState s = prof.start;
  for (const auto& seg : prof.segments) {
    if (seg.duration < 0.0) fail("negative segment duration");
    if (seg.jerk < lim.j_min - jtol || seg.jerk > lim.j_max + jtol)
      fail("jerk out of bounds");
    // acceleration is linear per segment: endpoints bound it
    const double a_end = s.a + seg.jerk * seg.duration;
    if (std::min(s.a, a_end) < lim.a_min - atol ||
        std::max(s.a, a_end) > lim.a_max + atol)
      fail("acceleration out of bounds");
    // velocity extremum where the acceleration crosses zero
    if (seg.jerk != 0.0) {
      const double tc = -s.a / seg.jerk;
      if (tc > 0.0 && tc < seg.duration) {
        const double vc = s.v + s.a * tc + 0.5 * seg.jerk * tc * tc;
        if (vc < lim.v_min - vtol || vc > lim.v_max + vtol)
          fail("velocity out of bounds (interior)");
      }
    }
    const double t = seg.duration;
    s.p += s.v * t + 0.5 * s.a * t * t + seg.jerk * t * t * t / 6.0;
    s.v += s.a * t + 0.5 * seg.jerk * t * t;
    s.a += seg.jerk * t;
    if (s.v < lim.v_min - vtol || s.v > lim.v_max + vtol)
      fail("velocity out of bounds");
  }
  r.end = s;
  if (std::abs(s.p - goal.p) > term_tol) fail("terminal position off");
  if (std::abs(s.v - goal.v) > term_tol) fail("terminal velocity off");
  if (std::abs(s.a - goal.a) > term_tol) fail("terminal acceleration off");
  return r;
}

}  // namespace profile_check
