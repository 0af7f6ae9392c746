#pragma once

#include <span>
#include <utility>

#include <Eigen/Core>
#include <Eigen/LU>

#include "percept/estimators.hpp"
#include "percept/sensor.hpp"
#include "percept/world.hpp"

namespace percept {

/// Normalized estimation error squared (x̂ - x)^T P^-1 (x̂ - x).
template <typename Scalar>
Scalar nees(const GaussianBelief<Scalar>& belief, const Vector2<Scalar>& truth) {
  require_spd(belief.covariance, "nees");
  const Vector2<Scalar> e = belief.mean - truth;
  return e.dot(belief.covariance.ldlt().solve(e));
}

struct Band {
  double lo;
  double hi;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Two-sided chi-square acceptance region for the average of `n_samples`
/// NEES values of dimension `dim`: [q(a/2), q(1-a/2)] of chi2(dim * n) / n.
Band chi2_band(int dim, int n_samples, double significance = 0.05);

/// Root mean squared position error over targets.
double rmse(std::span<const GaussianBelief<double>> beliefs, std::span<const Vec2> truths);

struct SemanticScores {
  double confidence_avg{0.0};
  double accuracy{0.0};
};

/// Mean true-class probability and fraction of targets whose strict argmax is
/// the true class. A tie for the maximum counts as incorrect.
SemanticScores semantic_scores(std::span<const CategoricalBelief<double>> beliefs,
                               std::span<const int> truths);

struct FactorHits {
  bool occlusion{false};
  bool light{false};
  bool redundancy{false};
};

struct HitCounts {
  long occlusion{0};
  long light{0};
  long redundancy{0};

  long total() const { return occlusion + light + redundancy; }
  void add(const FactorHits& h) {
    occlusion += h.occlusion;
    light += h.light;
    redundancy += h.redundancy;
  }
  HitCounts& operator+=(const HitCounts& o) {
    occlusion += o.occlusion;
    light += o.light;
    redundancy += o.redundancy;
    return *this;
  }
  friend bool operator==(const HitCounts&, const HitCounts&) = default;
};

/// Which ground-truth effects a measurement from `pose` of `target` suffers.
/// Redundancy means `pose` lies within `redundancy_radius` of a past pose.
FactorHits factor_hits(const Pose& pose, const Target& target, const World& world,
                       std::span<const Pose> past_poses, const SensorConfig& sensor,
                       double redundancy_radius);

/// Same as factor_hits for an already evaluated ground-truth context.
FactorHits factor_hits(const NoiseContext& context, const Pose& pose,
                       std::span<const Pose> past_poses, double redundancy_radius);

struct StepMetrics {
  int step{0};
  double nees_avg{0.0};
  double rmse{0.0};
  double confidence_avg{0.0};
  double accuracy{0.0};
  HitCounts hits;
};

}  // namespace percept
