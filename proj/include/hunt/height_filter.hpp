#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

namespace hunt {

/// One tick of raw height inputs. The barometric/GNSS height is always
/// available (absolute, arbitrary datum); the laser range is optional.
struct HeightInput {
  std::optional<double> laser_range;  ///< [m] downward beam, when returned
  double baro_height = 0.0;           ///< [m] fused GNSS+baro, always present
  double dt = 0.02;                   ///< [s] > 0
};

enum class HeightSource { laser, extrapolated, blending };

struct HeightEstimate {
  double height = 0.0;
  HeightSource source = HeightSource::extrapolated;
};

struct HeightFilterParams {
  double raw_min = 0.2;         ///< [m] laser returns below this are noise
  double raw_max = 8.0;         ///< [m] and beyond this out of spec
  double band_low = 1.0;        ///< [m] trust laser only when flying in ...
  double band_high = 5.0;       ///< [m] ... this estimated-height band
  double snap_threshold = 0.3;  ///< [m] adopt the laser outright if this close
  double blend_slope = 1.5;     ///< [m/s] max correction rate while re-acquiring
};

/// Height estimator fusing a precise but range-limited laser with a drifty
/// but always-available barometric height. Inside the trust band the laser
/// is authoritative: adopted outright when the estimate is close, otherwise
/// approached at a bounded slope. Outside it, the estimate coasts on baro
/// deltas alone, so a constant baro offset never leaks into the output.
/// The first update arms the filter: that baro reading becomes height zero.
class HeightFilter {
 public:
  explicit HeightFilter(HeightFilterParams params = {}) : params_(params) {}

  const HeightFilterParams& params() const { return params_; }

  HeightEstimate update(const HeightInput& input) {
    if (!armed_) {
      armed_ = true;
      last_baro_ = input.baro_height;
      estimate_ = 0.0;
      return {estimate_, HeightSource::extrapolated};
    }
    const double baro_delta = input.baro_height - last_baro_;
    last_baro_ = input.baro_height;

    const bool laser_ok =
        input.laser_range.has_value() &&
        *input.laser_range >= params_.raw_min &&
        *input.laser_range <= params_.raw_max &&
        estimate_ >= params_.band_low && estimate_ <= params_.band_high;

    if (!laser_ok) {
      estimate_ += baro_delta;
      return {estimate_, HeightSource::extrapolated};
    }

    const double laser = *input.laser_range;
    if (std::abs(laser - estimate_) <= params_.snap_threshold) {
      estimate_ = laser;
      return {estimate_, HeightSource::laser};
    }

    // Drifted while the laser was away: advance with the vehicle's motion
    // and spend at most blend_slope * dt on closing the gap.
    const double advanced = estimate_ + baro_delta;
    const double bound = params_.blend_slope * input.dt;
    estimate_ = advanced + std::clamp(laser - advanced, -bound, bound);
    return {estimate_, HeightSource::blending};
  }

 private:
  HeightFilterParams params_;
  bool armed_ = false;
  double last_baro_ = 0.0;
  double estimate_ = 0.0;
};

}  // namespace hunt
