#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "hunt/geom.hpp"

namespace hunt {

/// One camera observation of a balloon-like blob, expressed allocentrically:
/// the ray it was seen along plus a (noisy) range estimate.
struct BalloonDetection {
  Vec3 ray_origin;            ///< camera position [m]
  Vec3 ray_direction;         ///< unit vector
  double range_estimate = 0;  ///< distance along the ray [m], > 0
  double timestamp = 0;       ///< [s]

  /// Point implied by walking the estimated range down the ray.
  Vec3 position() const { return ray_origin + range_estimate * ray_direction; }
};

/// A candidate balloon: the last few supporting detections and their mean.
struct Hypothesis {
  struct Entry {
    Vec3 position;
    double timestamp = 0;
  };

  std::vector<Entry> history;  ///< FIFO, capacity given by params
  Vec3 position;               ///< mean of history positions
  int missed = 0;              ///< consecutive unobserved frames while in view
  std::uint64_t id = 0;        ///< creation order, stable across merges

  void recompute_mean() {
    Vec3 sum{};
    for (const Entry& e : history) sum += e.position;
    position = sum / static_cast<double>(history.size());
  }
};

struct WorldModelParams {
  /// Distance metric used to match a detection against stored hypotheses.
  enum class Metric {
    ray,    ///< point-to-ray distance: immune to range noise
    ground  ///< ground-plane Euclidean distance to the implied point
  };

  Metric metric = Metric::ray;
  double assign_threshold = 2.0;  ///< [m] match vs. spawn decision
  double merge_threshold = 2.0;   ///< [m] hypotheses closer than this fuse
  double corridor_low = 1.5;      ///< [m] balloons only live in this height band
  double corridor_high = 5.0;     ///< [m]
  int confirm_count = 8;          ///< detections needed before a hypothesis counts
  int history_cap = 8;            ///< FIFO depth
  int max_missed = 30;            ///< unconfirmed pruning threshold [frames]
};

/// Allocentric balloon map. Detections are matched to hypotheses by ray
/// distance (robust to range noise), histories are bounded FIFOs whose mean
/// is the hypothesis position, and near-duplicate hypotheses merge into the
/// older one. Confirmed entries are only ever removed by an explicit pop.
/// Single writer; reads are const.
class WorldModel {
 public:
  explicit WorldModel(WorldModelParams params = {}) : params_(params) {}

  const WorldModelParams& params() const { return params_; }
  const std::vector<Hypothesis>& hypotheses() const { return hyps_; }
  std::size_t discarded() const { return discarded_; }

  bool is_confirmed(const Hypothesis& h) const {
    return static_cast<int>(h.history.size()) >= params_.confirm_count;
  }

  /// Fold one detection into the map: drop it if its implied point lies
  /// outside the height corridor, else append it to the closest hypothesis
  /// (spawning a new one when none is within the assignment threshold) and
  /// restore the pairwise-separation invariant by merging.
  void ingest(const BalloonDetection& det) {
    const Vec3 point = det.position();
    if (point.z < params_.corridor_low || point.z > params_.corridor_high) {
      ++discarded_;
      return;
    }

    int best = -1;
    double best_dist = params_.assign_threshold;
    for (std::size_t i = 0; i < hyps_.size(); ++i) {
      const double d = match_distance(hyps_[i].position, det, point);
      if (d < best_dist) {  // strict: equal distances keep the lower index
        best_dist = d;
        best = static_cast<int>(i);
      }
    }

    if (best < 0) {
      Hypothesis h;
      h.id = next_id_++;
      h.history.push_back({point, det.timestamp});
      h.position = point;
      touched_.push_back(h.id);
      hyps_.push_back(std::move(h));
    } else {
      Hypothesis& h = hyps_[static_cast<std::size_t>(best)];
      if (static_cast<int>(h.history.size()) >= params_.history_cap)
        h.history.erase(h.history.begin());
      h.history.push_back({point, det.timestamp});
      h.recompute_mean();
      h.missed = 0;
      touched_.push_back(h.id);
    }

    merge_closure();
  }

  /// Close out one camera frame: hypotheses that were in view (per the
  /// caller's frustum predicate) but matched no detection since the last
  /// call accumulate a miss; unconfirmed ones are pruned after too many.
  /// Confirmed hypotheses never expire this way.
  template <class InViewPred>
  void end_frame(InViewPred&& in_view) {
    for (Hypothesis& h : hyps_) {
      const bool seen =
          std::find(touched_.begin(), touched_.end(), h.id) != touched_.end();
      if (seen) continue;
      if (in_view(h.position)) ++h.missed;
    }
    touched_.clear();
    std::erase_if(hyps_, [&](const Hypothesis& h) {
      return !is_confirmed(h) && h.missed >= params_.max_missed;
    });
  }

  /// Positions of confirmed hypotheses, closest to the given point first;
  /// equal distances keep creation order.
  std::vector<Vec3> confirmed(const Vec3& from) const {
    std::vector<const Hypothesis*> picked;
    for (const Hypothesis& h : hyps_)
      if (is_confirmed(h)) picked.push_back(&h);
    std::stable_sort(picked.begin(), picked.end(),
                     [&](const Hypothesis* a, const Hypothesis* b) {
                       const double da = (a->position - from).norm();
                       const double db = (b->position - from).norm();
                       if (da != db) return da < db;
                       return a->id < b->id;
                     });
    std::vector<Vec3> out;
    out.reserve(picked.size());
    for (const Hypothesis* h : picked) out.push_back(h->position);
    return out;
  }

  /// Remove the confirmed hypothesis nearest to the vehicle on the ground
  /// plane, provided it is within the pop radius. Returns whether one went.
  bool remove_popped(const Vec3& vehicle_position, double radius = 0.5) {
    int best = -1;
    double best_d = radius;
    for (std::size_t i = 0; i < hyps_.size(); ++i) {
      if (!is_confirmed(hyps_[i])) continue;
      const double d = ground_distance(hyps_[i].position, vehicle_position);
      if (d <= best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) return false;
    hyps_.erase(hyps_.begin() + best);
    return true;
  }

 private:
  double match_distance(const Vec3& hyp_pos, const BalloonDetection& det,
                        const Vec3& implied_point) const {
    if (params_.metric == WorldModelParams::Metric::ground)
      return ground_distance(hyp_pos, implied_point);
    return point_ray_distance(hyp_pos, det.ray_origin, det.ray_direction);
  }

  /// Merge any pair of hypotheses closer than the merge threshold, repeating
  /// until no such pair remains. The older hypothesis keeps its identity and
  /// absorbs the most recent entries of the union of both histories.
  void merge_closure() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < hyps_.size() && !changed; ++i) {
        for (std::size_t j = i + 1; j < hyps_.size() && !changed; ++j) {
          if ((hyps_[i].position - hyps_[j].position).norm() >=
              params_.merge_threshold)
            continue;
          const bool i_older = hyps_[i].id < hyps_[j].id;
          merge_into(i_older ? i : j, i_older ? j : i);
          changed = true;
        }
      }
    }
  }

  void merge_into(std::size_t keep, std::size_t gone) {
    Hypothesis& k = hyps_[keep];
    Hypothesis& g = hyps_[gone];
    std::vector<Hypothesis::Entry> all;
    all.reserve(k.history.size() + g.history.size());
    all.insert(all.end(), k.history.begin(), k.history.end());
    all.insert(all.end(), g.history.begin(), g.history.end());
    std::stable_sort(all.begin(), all.end(),
                     [](const Hypothesis::Entry& a, const Hypothesis::Entry& b) {
                       return a.timestamp < b.timestamp;
                     });
    const std::size_t cap = static_cast<std::size_t>(params_.history_cap);
    if (all.size() > cap) all.erase(all.begin(), all.end() - cap);
    k.history = std::move(all);
    k.recompute_mean();
    k.missed = std::min(k.missed, g.missed);
    hyps_.erase(hyps_.begin() + static_cast<std::ptrdiff_t>(gone));
  }

  WorldModelParams params_;
  std::vector<Hypothesis> hyps_;
  std::vector<std::uint64_t> touched_;  ///< ids assigned since last end_frame
  std::size_t discarded_ = 0;
  std::uint64_t next_id_ = 0;
};

}  // namespace hunt
