#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hunt {

/// Per-axis kinematic state of a triple integrator.
struct AxisState {
  double p = 0.0;  ///< position [m]
  double v = 0.0;  ///< velocity [m/s]
  double a = 0.0;  ///< acceleration [m/s^2]
};

/// Per-axis kinematic limits. Acceleration and jerk bounds must straddle zero.
struct AxisLimits {
  double v_min = 0.0;
  double v_max = 0.0;
  double a_min = 0.0;
  double a_max = 0.0;
  double j_min = 0.0;
  double j_max = 0.0;

  static AxisLimits symmetric(double v, double a, double j) {
    return {-v, v, -a, a, -j, j};
  }
  /// Stock horizontal-axis tuning (5 m/s, 4 m/s^2, 5 m/s^3).
  static AxisLimits horizontal() { return symmetric(5.0, 4.0, 5.0); }
  /// Stock vertical-axis tuning (1 m/s, 10 m/s^2, 50 m/s^3).
  static AxisLimits vertical() { return symmetric(1.0, 10.0, 50.0); }

  bool valid() const {
    return v_min < v_max && a_min < 0.0 && 0.0 < a_max && j_min < 0.0 &&
           0.0 < j_max;
  }
};

/// One constant-jerk piece of a motion profile.
struct ProfileSegment {
  double duration = 0.0;
  double jerk = 0.0;
};

/// Piecewise-constant-jerk trajectory for one axis.
struct MotionProfile {
  AxisState start;            ///< initial state (after any admissibility clamp)
  bool start_clamped = false; ///< true if the requested start was outside the
                              ///< admissible region and had to be adjusted
  std::vector<ProfileSegment> segments;

  double duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration;
    return t;
  }
};

/// Goal state violates velocity/acceleration limits or cannot be an endpoint
/// of any limit-respecting trajectory.
struct InfeasibleGoal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested duration is below the optimum for the given boundary states.
struct TimeTooShort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sample the profile state at time t. Negative t clamps to the start;
/// t past the end extrapolates with constant (final) acceleration.
inline AxisState sample(const MotionProfile& prof, double t) {
  AxisState s = prof.start;
  if (t <= 0.0) return s;
  double remaining = t;
  for (const auto& seg : prof.segments) {
    const double dt = std::min(remaining, seg.duration);
    s.p += s.v * dt + 0.5 * s.a * dt * dt + seg.jerk * dt * dt * dt / 6.0;
    s.v += s.a * dt + 0.5 * seg.jerk * dt * dt;
    s.a += seg.jerk * dt;
    remaining -= dt;
    if (remaining <= 0.0) return s;
  }
  if (remaining > 0.0) {  // constant-acceleration extension past the end
    s.p += s.v * remaining + 0.5 * s.a * remaining * remaining;
    s.v += s.a * remaining;
  }
  return s;
}

namespace detail {

constexpr double kTinySeg = 1e-12;
constexpr double kTolV = 1e-7;
constexpr double kTolA = 1e-7;
constexpr int kMaxIter = 100;

/// Fixed-capacity segment list used while assembling candidates.
struct SegList {
  std::array<ProfileSegment, 8> seg{};
  int n = 0;

  void push(double t, double j) {
    if (t <= kTinySeg) return;
    if (n > 0 && seg[n - 1].jerk == j) {  // merge equal-jerk neighbours
      seg[n - 1].duration += t;
      return;
    }
    seg[n] = {t, j};
    ++n;
  }
  void append(const SegList& o) {
    for (int i = 0; i < o.n; ++i) push(o.seg[i].duration, o.seg[i].jerk);
  }
  double duration() const {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += seg[i].duration;
    return t;
  }
};

struct VA {
  double v = 0.0;
  double a = 0.0;
};

/// Displacement and terminal (v, a) of a segment list from initial (v, a).
struct RunOut {
  double disp = 0.0;
  VA end;
};

inline RunOut run(const SegList& s, VA init) {
  RunOut o;
  o.end = init;
  for (int i = 0; i < s.n; ++i) {
    const double t = s.seg[i].duration, j = s.seg[i].jerk;
    o.disp += o.end.v * t + 0.5 * o.end.a * t * t + j * t * t * t / 6.0;
    o.end.v += o.end.a * t + 0.5 * j * t * t;
    o.end.a += j * t;
  }
  return o;
}

inline double ramp_jerk(double a_from, double a_to, const AxisLimits& lim) {
  return a_to > a_from ? lim.j_max : lim.j_min;
}

inline void push_ramp(SegList& s, double a_from, double a_to,
                      const AxisLimits& lim) {
  if (a_to == a_from) return;
  const double j = ramp_jerk(a_from, a_to, lim);
  s.push((a_to - a_from) / j, j);
}

/// Velocity change of a jerk-limited ramp from a_from to a_to.
inline double dv_ramp(double a_from, double a_to, const AxisLimits& lim) {
  if (a_to == a_from) return 0.0;
  const double j = ramp_jerk(a_from, a_to, lim);
  const double t = (a_to - a_from) / j;
  return a_from * t + 0.5 * j * t * t;
}

/// Velocity after immediately ramping acceleration to zero.
inline double v_flat(double v, double a, const AxisLimits& lim) {
  if (a == 0.0) return v;
  const double j = a > 0.0 ? lim.j_min : lim.j_max;
  return v - a * a / (2.0 * j);
}

/// Time-optimal transfer between (v0, a0) and (v1, a1), ignoring position.
/// Returns the minimum-duration bang[-hold]-bang acceleration move.
inline std::optional<SegList> transfer(double v0, double a0, double v1,
                                       double a1, const AxisLimits& lim) {
  const double dv = v1 - v0;
  const double c = 1.0 / (2.0 * lim.j_max) - 1.0 / (2.0 * lim.j_min);

  // Flat-to-flat moves have a closed-form optimum: one accel bump toward v1,
  // clipped with a constant-accel hold when the bump would exceed the limit.
  if (a0 == 0.0 && a1 == 0.0) {
    SegList s;
    if (dv == 0.0) return s;
    if (dv > 0.0) {
      const double ah = std::sqrt(dv / c);
      if (ah <= lim.a_max) {
        push_ramp(s, 0.0, ah, lim);
        push_ramp(s, ah, 0.0, lim);
      } else {
        const double dvr =
            dv_ramp(0.0, lim.a_max, lim) + dv_ramp(lim.a_max, 0.0, lim);
        push_ramp(s, 0.0, lim.a_max, lim);
        s.push((dv - dvr) / lim.a_max, 0.0);
        push_ramp(s, lim.a_max, 0.0, lim);
      }
    } else {
      const double ah = -std::sqrt(-dv / c);
      if (ah >= lim.a_min) {
        push_ramp(s, 0.0, ah, lim);
        push_ramp(s, ah, 0.0, lim);
      } else {
        const double dvr =
            dv_ramp(0.0, lim.a_min, lim) + dv_ramp(lim.a_min, 0.0, lim);
        push_ramp(s, 0.0, lim.a_min, lim);
        s.push((dv - dvr) / lim.a_min, 0.0);
        push_ramp(s, lim.a_min, 0.0, lim);
      }
    }
    return s;
  }

  std::optional<SegList> best;
  auto consider = [&](const SegList& cand) {
    const RunOut o = run(cand, {v0, a0});
    if (std::abs(o.end.v - v1) > kTolV || std::abs(o.end.a - a1) > kTolA)
      return;
    if (!best || cand.duration() < best->duration()) best = cand;
  };

  // Raise-then-lower: peak accel ah >= max(a0, a1).
  double rhs = (dv + a0 * a0 / (2.0 * lim.j_max) - a1 * a1 / (2.0 * lim.j_min)) / c;
  if (rhs >= 0.0) {
    const double r = std::sqrt(rhs);
    for (const double ah : {r, -r}) {
      if (ah >= std::max(a0, a1) - 1e-12 && ah <= lim.a_max + 1e-12) {
        SegList s;
        push_ramp(s, a0, std::min(ah, lim.a_max), lim);
        push_ramp(s, std::min(ah, lim.a_max), a1, lim);
        consider(s);
      }
    }
  }
  if (lim.a_max >= std::max(a0, a1)) {  // clipped at a_max with a hold
    const double dvr = dv_ramp(a0, lim.a_max, lim) + dv_ramp(lim.a_max, a1, lim);
    const double h = (dv - dvr) / lim.a_max;
    if (h >= -1e-12) {
      SegList s;
      push_ramp(s, a0, lim.a_max, lim);
      s.push(std::max(h, 0.0), 0.0);
      push_ramp(s, lim.a_max, a1, lim);
      consider(s);
    }
  }
  // Lower-then-raise: valley accel ah <= min(a0, a1).
  rhs = ((a1 * a1 / (2.0 * lim.j_max) - a0 * a0 / (2.0 * lim.j_min)) - dv) / c;
  if (rhs >= 0.0) {
    const double r = std::sqrt(rhs);
    for (const double ah : {r, -r}) {
      if (ah <= std::min(a0, a1) + 1e-12 && ah >= lim.a_min - 1e-12) {
        SegList s;
        push_ramp(s, a0, std::max(ah, lim.a_min), lim);
        push_ramp(s, std::max(ah, lim.a_min), a1, lim);
        consider(s);
      }
    }
  }
  if (lim.a_min <= std::min(a0, a1)) {  // clipped at a_min with a hold
    const double dvr = dv_ramp(a0, lim.a_min, lim) + dv_ramp(lim.a_min, a1, lim);
    const double h = (dv - dvr) / lim.a_min;
    if (h >= -1e-12) {
      SegList s;
      push_ramp(s, a0, lim.a_min, lim);
      s.push(std::max(h, 0.0), 0.0);
      push_ramp(s, lim.a_min, a1, lim);
      consider(s);
    }
  }
  return best;
}

/// Candidate profiles that move (v0, a0) -> (vf, 0) while covering
/// displacement dp, searched on the "raise the velocity" side only;
/// the caller handles the mirrored side by reflection.
inline void candidates_up(double v0, double a0, double vf, double dp,
                          const AxisLimits& lim, std::vector<SegList>& out) {
  const double dp_tol = 1e-9 * std::max(1.0, std::abs(dp));

  // Direct transfer, accepted when its displacement already matches.
  if (auto d = transfer(v0, a0, vf, 0.0, lim)) {
    if (std::abs(run(*d, {v0, a0}).disp - dp) <= std::max(dp_tol, 1e-9))
      out.push_back(*d);
  }

  // Peak-velocity family: head to (vp, 0), tail to (vf, 0).
  const double vp_lo = std::max(vf, v_flat(v0, a0, lim));
  auto bulge = [&](double vp) -> std::optional<SegList> {
    auto head = transfer(v0, a0, vp, 0.0, lim);
    auto tail = transfer(vp, 0.0, vf, 0.0, lim);
    if (!head || !tail) return std::nullopt;
    SegList s = *head;
    s.append(*tail);
    return s;
  };
  auto bulge_disp = [&](double vp) -> std::optional<double> {
    auto s = bulge(vp);
    if (!s) return std::nullopt;
    return run(*s, {v0, a0}).disp;
  };
  if (vp_lo <= lim.v_max) {
    // Illinois root search for displacement == dp on a sign-bracketed
    // interval. Endpoint values are passed in so nothing is re-evaluated;
    // secant proposals fall back to bisection when they leave the bracket
    // or an evaluation fails.
    auto root_branch = [&](double a, double b, double fa, double fb) {
      double ga = fa - dp, gb = fb - dp;
      if (ga * gb > 0.0) return;
      double x = 0.5 * (a + b);
      for (int i = 0; i < kMaxIter && b - a > 1e-13; ++i) {
        x = gb != ga ? a - ga * (b - a) / (gb - ga) : 0.5 * (a + b);
        if (!(x > a && x < b)) x = 0.5 * (a + b);
        auto fx = bulge_disp(x);
        if (!fx) {
          x = 0.5 * (a + b);
          fx = bulge_disp(x);
          if (!fx) break;
        }
        const double gx = *fx - dp;
        if (std::abs(gx) <= 1e-12 * std::max(1.0, std::abs(dp))) break;
        if ((gx < 0.0) == (ga < 0.0)) {
          a = x;
          ga = gx;
          gb *= 0.5;
        } else {
          b = x;
          gb = gx;
          ga *= 0.5;
        }
      }
      if (auto s = bulge(x)) out.push_back(*s);
    };
    // Displacement versus vp is nonincreasing while vp <= 0 and nondecreasing
    // after (widening the bulge adds travel at velocity vp), so its minimum
    // sits at vp = 0 clamped into the search range. When the endpoint values
    // straddle dp the single crossing is found directly; when both ends
    // overshoot, the family reaches below dp only if its value at the
    // minimum does, and the two crossings straddle that point. Both ends
    // falling short means the family cannot reach dp at all.
    const auto flo = bulge_disp(vp_lo);
    const auto fhi = bulge_disp(lim.v_max);
    if (flo && fhi) {
      if ((*flo - dp) * (*fhi - dp) <= 0.0) {
        root_branch(vp_lo, lim.v_max, *flo, *fhi);
      } else if (*flo > dp && *fhi > dp && vp_lo < 0.0 && lim.v_max > 0.0) {
        if (const auto fdip = bulge_disp(0.0)) {
          root_branch(vp_lo, 0.0, *flo, *fdip);
          root_branch(0.0, lim.v_max, *fdip, *fhi);
        }
      }
    }

    // Cruise at v_max when even the widest bulge falls short.
    if (lim.v_max > kTinySeg) {
      if (auto head = transfer(v0, a0, lim.v_max, 0.0, lim)) {
        if (auto tail = transfer(lim.v_max, 0.0, vf, 0.0, lim)) {
          SegList s = *head;
          const double d_ht = run(*head, {v0, a0}).disp +
                              run(*tail, {lim.v_max, 0.0}).disp;
          const double tc = (dp - d_ht) / lim.v_max;
          if (tc >= 0.0) {
            s.push(tc, 0.0);
            s.append(*tail);
            out.push_back(s);
          }
        }
      }
    }
  }

  // Submerged-knee family (start accel below zero): soften the deceleration
  // with an intermediate apex ah in [a0, 0] while the velocity stays
  // monotone; covers displacements just past the direct transfer.
  if (a0 < -1e-12) {
    const double dv_t = vf - v0;
    auto knee = [&](double ah) -> std::optional<SegList> {
      const double A = 1.0 / (2.0 * lim.j_min) - 1.0 / (2.0 * lim.j_max);
      const double B = (ah * ah - a0 * a0) / (2.0 * lim.j_max) -
                       ah * ah / (2.0 * lim.j_min);
      const double rhs = (dv_t - B) / A;
      if (rhs >= 0.0) {
        const double k = -std::sqrt(rhs);
        if (k >= lim.a_min - 1e-12 && k <= ah + 1e-12) {
          SegList s;
          push_ramp(s, a0, ah, lim);
          push_ramp(s, ah, std::max(k, lim.a_min), lim);
          push_ramp(s, std::max(k, lim.a_min), 0.0, lim);
          const RunOut o = run(s, {v0, a0});
          if (std::abs(o.end.v - vf) <= kTolV && std::abs(o.end.a) <= kTolA)
            return s;
        }
      }
      if (lim.a_min <= std::min(ah, 0.0)) {  // clipped at a_min with a hold
        const double dvr = dv_ramp(a0, ah, lim) + dv_ramp(ah, lim.a_min, lim) +
                           dv_ramp(lim.a_min, 0.0, lim);
        const double h = (dv_t - dvr) / lim.a_min;
        if (h >= 0.0) {
          SegList s;
          push_ramp(s, a0, ah, lim);
          push_ramp(s, ah, lim.a_min, lim);
          s.push(h, 0.0);
          push_ramp(s, lim.a_min, 0.0, lim);
          const RunOut o = run(s, {v0, a0});
          if (std::abs(o.end.v - vf) <= kTolV && std::abs(o.end.a) <= kTolA)
            return s;
        }
      }
      return std::nullopt;
    };
    constexpr int kScan = 32;
    struct Pt {
      double ah, f;
    };
    std::vector<Pt> pts;
    for (int i = 0; i <= kScan; ++i) {
      const double ah = a0 + (0.0 - a0) * i / kScan;
      if (auto s = knee(ah)) pts.push_back({ah, run(*s, {v0, a0}).disp - dp});
    }
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      if (pts[i].f * pts[i + 1].f > 0.0) continue;
      double a = pts[i].ah, b = pts[i + 1].ah;
      double ga = pts[i].f, gb = pts[i + 1].f;
      double x = 0.5 * (a + b);
      for (int it = 0; it < kMaxIter && b - a > 1e-13; ++it) {
        x = gb != ga ? a - ga * (b - a) / (gb - ga) : 0.5 * (a + b);
        if (!(x > a && x < b)) x = 0.5 * (a + b);
        auto s = knee(x);
        if (!s) {
          x = 0.5 * (a + b);
          s = knee(x);
          if (!s) break;
        }
        const double gx = run(*s, {v0, a0}).disp - dp;
        if (std::abs(gx) <= 1e-12 * std::max(1.0, std::abs(dp))) break;
        if ((gx < 0.0) == (ga < 0.0)) {
          a = x;
          ga = gx;
          gb *= 0.5;
        } else {
          b = x;
          gb = gx;
          ga *= 0.5;
        }
      }
      if (auto s = knee(x)) out.push_back(*s);
    }
  }
}

inline AxisLimits reflect(const AxisLimits& lim) {
  return {-lim.v_max, -lim.v_min, -lim.a_max, -lim.a_min,
          -lim.j_max, -lim.j_min};
}

/// Minimum-duration profile from (v0, a0) to (vf, 0) covering displacement dp.
inline SegList plan_core(double v0, double a0, double vf, double dp,
                         const AxisLimits& lim) {
  std::vector<SegList> cands;
  candidates_up(v0, a0, vf, dp, lim, cands);

  std::vector<SegList> mirrored;
  candidates_up(-v0, -a0, -vf, -dp, reflect(lim), mirrored);
  for (auto& s : mirrored) {
    for (int i = 0; i < s.n; ++i) s.seg[i].jerk = -s.seg[i].jerk;
    cands.push_back(s);
  }

  const SegList* best = nullptr;
  const double dp_tol = 1e-6 * std::max(1.0, std::abs(dp));
  for (const auto& s : cands) {
    const RunOut o = run(s, {v0, a0});
    if (std::abs(o.disp - dp) > dp_tol) continue;
    if (std::abs(o.end.v - vf) > 1e-6 || std::abs(o.end.a) > 1e-6) continue;
    if (!best || s.duration() < best->duration() ||
        (s.duration() == best->duration() && s.n < best->n))
      best = &s;
  }
  if (!best)
    throw std::logic_error("trajectory: no feasible profile candidate");
  return *best;
}

/// Clamp a state into the admissible region: box limits plus the
/// requirement that ramping the acceleration to zero cannot push the
/// velocity outside its limits.
inline bool clamp_admissible(AxisState& s, const AxisLimits& lim) {
  bool changed = false;
  auto clamp1 = [&](double& x, double lo, double hi) {
    const double c = std::clamp(x, lo, hi);
    if (c != x) {
      x = c;
      changed = true;
    }
  };
  clamp1(s.v, lim.v_min, lim.v_max);
  clamp1(s.a, lim.a_min, lim.a_max);
  if (s.a > 0.0) {
    const double overshoot = s.v + s.a * s.a / (2.0 * -lim.j_min);
    if (overshoot > lim.v_max) {
      s.a = std::sqrt(std::max(0.0, 2.0 * -lim.j_min * (lim.v_max - s.v)));
      changed = true;
    }
  } else if (s.a < 0.0) {
    const double undershoot = s.v - s.a * s.a / (2.0 * lim.j_max);
    if (undershoot < lim.v_min) {
      s.a = -std::sqrt(std::max(0.0, 2.0 * lim.j_max * (s.v - lim.v_min)));
      changed = true;
    }
  }
  return changed;
}

inline bool state_admissible(const AxisState& s, const AxisLimits& lim) {
  if (s.v < lim.v_min - 1e-9 || s.v > lim.v_max + 1e-9) return false;
  if (s.a < lim.a_min - 1e-9 || s.a > lim.a_max + 1e-9) return false;
  if (s.a > 0.0 && s.v + s.a * s.a / (2.0 * -lim.j_min) > lim.v_max + 1e-9)
    return false;
  if (s.a < 0.0 && s.v - s.a * s.a / (2.0 * lim.j_max) < lim.v_min - 1e-9)
    return false;
  return true;
}

inline MotionProfile finish(const AxisState& start, bool clamped,
                            const SegList& segs) {
  MotionProfile prof;
  prof.start = start;
  prof.start_clamped = clamped;
  prof.segments.reserve(segs.n);
  for (int i = 0; i < segs.n; ++i) prof.segments.push_back(segs.seg[i]);
  return prof;
}

}  // namespace detail

/// Plan the minimum-duration jerk/accel/velocity-limited move from start to
/// goal. The start is clamped into the admissible region if needed (flagged
/// on the returned profile); an inadmissible goal throws InfeasibleGoal.
inline MotionProfile plan_time_optimal(AxisState start, const AxisState& goal,
                                       const AxisLimits& lim) {
  if (!lim.valid()) throw std::invalid_argument("trajectory: bad limits");
  for (const double x : {start.p, start.v, start.a, goal.p, goal.v, goal.a})
    if (!std::isfinite(x))
      throw std::invalid_argument("trajectory: non-finite state");

  const bool clamped = detail::clamp_admissible(start, lim);

  // A goal is reachable as an endpoint only if running time backwards from it
  // also stays within limits (mirror of the start admissibility condition).
  if (goal.v < lim.v_min - 1e-9 || goal.v > lim.v_max + 1e-9 ||
      goal.a < lim.a_min - 1e-9 || goal.a > lim.a_max + 1e-9)
    throw InfeasibleGoal("goal outside velocity/acceleration limits");
  if (goal.a > 0.0 &&
      goal.v - goal.a * goal.a / (2.0 * lim.j_max) < lim.v_min - 1e-9)
    throw InfeasibleGoal("goal acceleration inconsistent with v_min");
  if (goal.a < 0.0 &&
      goal.v + goal.a * goal.a / (2.0 * -lim.j_min) > lim.v_max + 1e-9)
    throw InfeasibleGoal("goal acceleration inconsistent with v_max");

  const double dp = goal.p - start.p;

  if (std::abs(goal.a) <= 1e-12) {
    const detail::SegList segs =
        detail::plan_core(start.v, start.a, goal.v, dp, lim);
    return detail::finish(start, clamped, segs);
  }

  if (std::abs(start.a) <= 1e-12) {
    // Nonzero goal acceleration with a flat start: solve time-reversed
    // (velocities negate, accelerations keep sign, jerk bounds mirror).
    const detail::SegList rev = detail::plan_core(
        -goal.v, goal.a, -start.v, -dp,
        AxisLimits{-lim.v_max, -lim.v_min, lim.a_min, lim.a_max, -lim.j_max,
                   -lim.j_min});
    detail::SegList fwd;
    for (int i = rev.n - 1; i >= 0; --i)
      fwd.push(rev.seg[i].duration, -rev.seg[i].jerk);
    return detail::finish(start, clamped, fwd);
  }

  // Both endpoint accelerations nonzero: ramp the start accel to zero first,
  // then solve the remainder (goal-exact; optimal once the ramp is inevitable
  // in the same direction, and near-optimal otherwise).
  detail::SegList pre;
  detail::push_ramp(pre, start.a, 0.0, lim);
  const detail::RunOut o = detail::run(pre, {start.v, start.a});
  AxisState mid{start.p + o.disp, o.end.v, 0.0};
  MotionProfile rest = plan_time_optimal(mid, goal, lim);
  MotionProfile prof;
  prof.start = start;
  prof.start_clamped = clamped;
  for (int i = 0; i < pre.n; ++i) prof.segments.push_back(pre.seg[i]);
  for (const auto& s : rest.segments) prof.segments.push_back(s);
  return prof;
}

/// Re-time an already-planned time-optimal move to arrive at total_time.
/// `optimal` must be the plan_time_optimal result for the same goal and
/// limits; this overload exists so callers that already hold the optimal
/// profile (e.g. axis synchronization) skip re-planning it. Semantics are
/// those of plan_fixed_time(start, goal, lim, total_time) below.
inline MotionProfile plan_fixed_time(const MotionProfile& optimal,
                                     const AxisState& goal,
                                     const AxisLimits& lim,
                                     double total_time) {
  const double t_opt = optimal.duration();
  if (total_time < t_opt - 1e-9)
    throw TimeTooShort("requested duration below the optimum");
  if (std::abs(total_time - t_opt) <= 1e-6) return optimal;

  const AxisState s0 = optimal.start;  // post-clamp start

  // Floors keep both boundary states admissible under the scaled limits.
  auto v_need = [&](const AxisState& s) {
    double up = std::max(0.0, s.v);
    double dn = std::max(0.0, -s.v);
    if (s.a > 0.0) up = std::max(up, s.v + s.a * s.a / (2.0 * -lim.j_min));
    if (s.a < 0.0) dn = std::max(dn, -(s.v - s.a * s.a / (2.0 * lim.j_max)));
    return std::max(up / std::max(lim.v_max, 1e-12),
                    dn / std::max(-lim.v_min, 1e-12));
  };
  auto a_need = [&](const AxisState& s) {
    return std::max(std::max(0.0, s.a) / lim.a_max,
                    std::max(0.0, -s.a) / -lim.a_min);
  };

  const double lv_floor =
      std::min(1.0, std::max({v_need(s0), v_need(goal), 1e-9}) + 1e-9);
  const double la_floor =
      std::min(1.0, std::max({a_need(s0), a_need(goal), 1e-9}) + 1e-9);

  auto scaled = [&](double lv, double la, double lj) {
    AxisLimits l = lim;
    l.v_min *= lv;
    l.v_max *= lv;
    l.a_min *= la;
    l.a_max *= la;
    l.j_min *= lj;
    l.j_max *= lj;
    return l;
  };
  auto duration_at = [&](double lv, double la,
                         double lj) -> std::optional<double> {
    const AxisLimits l = scaled(lv, la, lj);
    if (!detail::state_admissible(s0, l) || !detail::state_admissible(goal, l))
      return std::nullopt;
    try {
      return plan_time_optimal(s0, goal, l).duration();
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };

  // Shrink one scale from 1 toward its floor while the other knobs stay
  // fixed. Duration grows as the scale shrinks but can jump upward where a
  // profile family stops being feasible, so on a miss the stage adopts the
  // short side of its bracket (duration <= total_time) and leaves the rest
  // of the gap to the next knob. The root search is Illinois: secant
  // proposals on a maintained sign bracket with the retained side's residual
  // halved to avoid stagnation, and midpoint fallbacks where a scaled
  // evaluation fails.
  struct StageResult {
    double scale = 1.0;
    std::optional<double> dur;  // duration at scale, when known
  };
  auto run_stage = [&](double floor, auto eval,
                       std::optional<double> dur_at_one) -> StageResult {
    auto df = eval(floor);
    for (int bump = 0; !df && bump < 8; ++bump) {  // nudge off a bad floor
      floor = std::min(1.0, floor + std::max(1e-9, (1.0 - floor) * 1e-4));
      df = eval(floor);
    }
    if (!df) return {1.0, std::nullopt};   // stage unusable, keep it neutral
    if (*df <= total_time) return {floor, df};  // floor is short: adopt it
    if (!dur_at_one) dur_at_one = eval(1.0);
    if (!dur_at_one || *dur_at_one > total_time)
      return {1.0, dur_at_one};  // no bracket: the whole stage is too long
    double lo = floor, hi = 1.0;  // duration(lo) > total_time >= duration(hi)
    double glo = *df - total_time, ghi = *dur_at_one - total_time;
    std::optional<double> dur_hi = dur_at_one;
    for (int i = 0; i < detail::kMaxIter && hi - lo > 1e-12; ++i) {
      double x = glo != ghi ? lo - glo * (hi - lo) / (ghi - glo)
                            : 0.5 * (lo + hi);
      if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
      auto d = eval(x);
      if (!d) {  // treat evaluation failures as the long side
        x = 0.5 * (lo + hi);
        d = eval(x);
        if (!d) {
          lo = x;
          continue;
        }
      }
      const double g = *d - total_time;
      if (std::abs(g) <= 1e-7) return {x, d};
      if (g > 0.0) {
        lo = x;
        glo = g;
        ghi *= 0.5;
      } else {
        hi = x;
        ghi = g;
        dur_hi = d;
        glo *= 0.5;
      }
    }
    return {hi, dur_hi};  // short side of the remaining bracket
  };

  // Jerk floor keeps boundary accel-to-zero ramps inside velocity limits.
  auto jerk_floor = [&](double lv) {
    double ljf = 1e-6;
    for (const AxisState* st : {&s0, &goal}) {
      if (st->a > 0.0 && lim.v_max * lv > st->v)
        ljf = std::max(ljf, st->a * st->a /
                                (2.0 * -lim.j_min *
                                 std::max(lim.v_max * lv - st->v, 1e-12)));
      if (st->a < 0.0 && st->v > lim.v_min * lv)
        ljf = std::max(ljf, st->a * st->a /
                                (2.0 * lim.j_max *
                                 std::max(st->v - lim.v_min * lv, 1e-12)));
    }
    return std::min(1.0, ljf + 1e-9);
  };

  // The duration landscape can have holes along any single knob, so several
  // knob orders are attempted; the first exact hit wins and the longest
  // not-too-long result is kept as the fallback.
  double best_lv = 1.0, best_la = 1.0, best_lj = 1.0, best_d = t_opt;
  bool exact = false;
  auto consider = [&](double lv, double la, double lj,
                      std::optional<double> known) {
    if (exact) return;
    const auto d = known ? known : duration_at(lv, la, lj);
    if (!d || *d > total_time + 1e-6) return;
    if (*d > best_d) {
      best_d = *d;
      best_lv = lv;
      best_la = la;
      best_lj = lj;
    }
    if (std::abs(*d - total_time) <= 1e-6) exact = true;
  };
  // Shrink accel, then jerk, with the velocity scale held at lv.
  auto fill_from = [&](double lv) {
    if (exact) return;
    const StageResult sa = run_stage(
        la_floor, [&](double x) { return duration_at(lv, x, 1.0); },
        std::nullopt);
    consider(lv, sa.scale, 1.0, sa.dur);
    if (exact) return;
    const StageResult sj = run_stage(
        jerk_floor(lv), [&](double x) { return duration_at(lv, sa.scale, x); },
        std::nullopt);
    consider(lv, sa.scale, sj.scale, sj.dur);
  };

  const StageResult s1 = run_stage(
      lv_floor, [&](double x) { return duration_at(x, 1.0, 1.0); }, t_opt);
  consider(s1.scale, 1.0, 1.0, s1.dur);
  if (!exact) fill_from(s1.scale);
  if (!exact) fill_from(1.0);
  for (int i = 7; i >= 1 && !exact; --i)
    fill_from(lv_floor + (1.0 - lv_floor) * i / 8.0);

  MotionProfile prof =
      plan_time_optimal(s0, goal, scaled(best_lv, best_la, best_lj));
  prof.start_clamped = optimal.start_clamped;
  return prof;
}

/// Plan a move that arrives at the given total time, found by scaling down
/// effective velocity/acceleration/jerk limits and re-planning time-optimally
/// per candidate. Throws TimeTooShort if total_time is below the optimum.
///
/// Durations achievable this way form a subset of [optimum, reach]: moves
/// between resting endpoints cover it completely (any requested time is hit
/// within 1e-6 s), while nonzero boundary velocities bound the reach and can
/// leave gaps where no scaled-limit optimum exists. Unachievable requests
/// return the longest achievable duration below them, and re-requesting an
/// achieved duration reproduces it.
inline MotionProfile plan_fixed_time(const AxisState& start,
                                     const AxisState& goal,
                                     const AxisLimits& lim,
                                     double total_time) {
  return plan_fixed_time(plan_time_optimal(start, goal, lim), goal, lim,
                         total_time);
}

}  // namespace hunt
