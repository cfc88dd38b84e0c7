#include "hunt/height_filter.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

using hunt::HeightEstimate;
using hunt::HeightFilter;
using hunt::HeightInput;
using hunt::HeightSource;

HeightInput in(std::optional<double> laser, double baro, double dt = 0.02) {
  HeightInput i;
  i.laser_range = laser;
  i.baro_height = baro;
  i.dt = dt;
  return i;
}

TEST(HeightFilter, FirstUpdateArmsAtZero) {
  HeightFilter f;
  const HeightEstimate e = f.update(in(std::nullopt, 103.2));
  EXPECT_EQ(e.source, HeightSource::extrapolated);
  EXPECT_DOUBLE_EQ(e.height, 0.0);
}

TEST(HeightFilter, FollowsBaroDeltasBelowTheTrustBand) {
  HeightFilter f;
  f.update(in(std::nullopt, 100.0));
  HeightEstimate e{};
  // climb to 0.9 m in baro terms; a (spurious) laser return is ignored
  // because the estimate has not reached the trust band yet
  for (int k = 1; k <= 45; ++k) e = f.update(in(0.5, 100.0 + 0.02 * k));
  EXPECT_EQ(e.source, HeightSource::extrapolated);
  EXPECT_NEAR(e.height, 0.9, 1e-12);
}

TEST(HeightFilter, BaroOffsetNeverLeaks) {
  HeightFilter a, b;
  const double offset = 57.0;
  std::vector<double> ha, hb;
  for (int k = 0; k < 200; ++k) {
    const double baro = 0.03 * k;  // same climb, two different datums
    const std::optional<double> laser =
        (0.03 * k > 1.0) ? std::optional<double>(0.03 * k) : std::nullopt;
    ha.push_back(a.update(in(laser, baro)).height);
    hb.push_back(b.update(in(laser, baro + offset)).height);
  }
  for (std::size_t k = 0; k < ha.size(); ++k)
    EXPECT_NEAR(ha[k], hb[k], 1e-12) << "tick " << k;
}

TEST(HeightFilter, AdoptsCloseLaserInsideBand) {
  HeightFilter f;
  f.update(in(std::nullopt, 50.0));
  for (int k = 1; k <= 60; ++k) f.update(in(std::nullopt, 50.0 + 0.02 * k));
  // estimate now 1.2 m; laser says 1.25 m: within the snap threshold
  const HeightEstimate e = f.update(in(1.25, 51.2));
  EXPECT_EQ(e.source, HeightSource::laser);
  EXPECT_DOUBLE_EQ(e.height, 1.25);
}

TEST(HeightFilter, RawOutliersAreIgnored) {
  HeightFilter f;
  f.update(in(std::nullopt, 0.0));
  for (int k = 1; k <= 100; ++k) f.update(in(std::nullopt, 0.02 * k));  // 2.0 m

  HeightEstimate e = f.update(in(0.1, 2.0));  // below the raw floor
  EXPECT_EQ(e.source, HeightSource::extrapolated);
  e = f.update(in(8.5, 2.0));  // beyond the raw ceiling
  EXPECT_EQ(e.source, HeightSource::extrapolated);
  EXPECT_NEAR(e.height, 2.0, 1e-12);
  e = f.update(in(2.05, 2.0));  // sane reading is welcome again
  EXPECT_EQ(e.source, HeightSource::laser);
}

// The documented example: estimate drifted to 4.0 m, laser returns 3.0 m,
// dt = 0.1 s -> the estimate moves exactly the slope bound, 0.15 m.
TEST(HeightFilter, BlendStepIsSlopeBounded) {
  HeightFilter f;
  f.update(in(std::nullopt, 10.0));
  for (int k = 1; k <= 40; ++k) f.update(in(std::nullopt, 10.0 + 0.1 * k));
  // estimate 4.0 m, baro now flat at 14.0
  HeightEstimate e = f.update(in(3.0, 14.0, 0.1));
  EXPECT_EQ(e.source, HeightSource::blending);
  EXPECT_NEAR(e.height, 3.85, 1e-12);

  // keep blending: 0.15 per tick until within 0.3 m, then adopt outright
  // (the adoption tick itself may jump up to the 0.3 m snap threshold)
  double prev = e.height;
  int blend_ticks = 0;
  while (e.source == HeightSource::blending && blend_ticks < 50) {
    e = f.update(in(3.0, 14.0, 0.1));
    const double limit =
        e.source == HeightSource::blending ? 0.15 + 1e-12 : 0.3 + 1e-12;
    EXPECT_LE(std::abs(e.height - prev), limit);
    prev = e.height;
    ++blend_ticks;
  }
  EXPECT_EQ(e.source, HeightSource::laser);
  EXPECT_DOUBLE_EQ(e.height, 3.0);
  EXPECT_GT(blend_ticks, 2);  // the 1.0 m gap cannot close in one step
}

// Flight-shaped sequence: arm, climb through the band (laser acquired),
// climb above it (baro coasting with injected drift), descend back in
// (bounded re-acquisition), settle. Sources must switch exactly
// extrapolated -> laser -> extrapolated -> blending -> laser.
TEST(HeightFilter, FlightProfileReproducesSourceSequence) {
  HeightFilter f;
  const double dt = 0.02;
  std::vector<HeightSource> collapsed;
  std::vector<double> heights;

  double truth = 0.0, baro = 200.0;  // arbitrary datum
  auto step = [&](double climb_rate, double baro_drift_rate) {
    truth += climb_rate * dt;
    baro += (climb_rate + baro_drift_rate) * dt;
    const std::optional<double> laser =
        (truth >= 0.2 && truth <= 8.0) ? std::optional<double>(truth)
                                       : std::nullopt;
    const HeightEstimate e = f.update(in(laser, baro, dt));
    heights.push_back(e.height);
    if (collapsed.empty() || collapsed.back() != e.source)
      collapsed.push_back(e.source);
  };

  step(0.0, 0.0);                                // arm on the pad
  for (int k = 0; k < 50; ++k) step(0.0, 0.0);   // idle 1 s
  for (int k = 0; k < 150; ++k) step(1.0, 0.0);  // climb to 3 m
  for (int k = 0; k < 100; ++k) step(0.0, 0.0);  // hover (laser)
  for (int k = 0; k < 140; ++k) step(1.25, 0.0); // climb to 6.5 m, leaves band
  for (int k = 0; k < 50; ++k) step(0.0, 0.5);   // hover high, baro drifts +0.5
  for (int k = 0; k < 140; ++k) step(-1.25, 0.0);// descend to 3 m
  for (int k = 0; k < 100; ++k) step(0.0, 0.0);  // settle

  const std::vector<HeightSource> want = {
      HeightSource::extrapolated, HeightSource::laser,
      HeightSource::extrapolated, HeightSource::blending,
      HeightSource::laser};
  EXPECT_EQ(collapsed, want);

  // Continuity: no tick moves the estimate more than the snap threshold
  // plus the vehicle's own motion allowance.
  for (std::size_t k = 1; k < heights.size(); ++k)
    EXPECT_LE(std::abs(heights[k] - heights[k - 1]),
              0.3 + 1.25 * dt + 1e-9)
        << "tick " << k;

  // And the final estimate agrees with the laser (drift corrected away).
  EXPECT_NEAR(heights.back(), truth, 1e-9);
}

}  // namespace
