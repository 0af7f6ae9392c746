#include "percept/metrics.hpp"

#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

namespace percept {

Band chi2_band(int dim, int n_samples, double significance) {
  if (dim < 1 || n_samples < 1) throw InvalidArgument("chi2_band: dim and n must be >= 1");
  if (!(significance > 0.0 && significance < 1.0))
    throw InvalidArgument("chi2_band: significance must be in (0, 1)");
  const boost::math::chi_squared dist(double(dim) * n_samples);
  const double n = n_samples;
  return {boost::math::quantile(dist, significance / 2.0) / n,
          boost::math::quantile(dist, 1.0 - significance / 2.0) / n};
}

double rmse(std::span<const GaussianBelief<double>> beliefs, std::span<const Vec2> truths) {
  if (beliefs.size() != truths.size()) throw InvalidArgument("rmse: length mismatch");
  if (beliefs.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < beliefs.size(); ++i)
    sum += (beliefs[i].mean - truths[i]).squaredNorm();
  return std::sqrt(sum / double(beliefs.size()));
}

SemanticScores semantic_scores(std::span<const CategoricalBelief<double>> beliefs,
                               std::span<const int> truths) {
  if (beliefs.size() != truths.size()) throw InvalidArgument("semantic_scores: length mismatch");
  if (beliefs.empty()) return {};
  SemanticScores s;
  int correct = 0;
  for (std::size_t i = 0; i < beliefs.size(); ++i) {
    const Eigen::VectorXd& p = beliefs[i].probs;
    const int truth = truths[i];
    if (truth < 0 || truth >= p.size()) throw InvalidArgument("semantic_scores: bad class label");
    s.confidence_avg += p(truth);
    bool strict_max = true;
    for (Eigen::Index j = 0; j < p.size(); ++j)
      if (j != truth && p(j) >= p(truth)) strict_max = false;
    correct += strict_max;
  }
  s.confidence_avg /= double(beliefs.size());
  s.accuracy = double(correct) / double(beliefs.size());
  return s;
}

FactorHits factor_hits(const Pose& pose, const Target& target, const World& world,
                       std::span<const Pose> past_poses, const SensorConfig& sensor,
                       double redundancy_radius) {
  return factor_hits(ground_truth_context(pose, target, world, sensor), pose, past_poses,
                     redundancy_radius);
}

FactorHits factor_hits(const NoiseContext& context, const Pose& pose,
                       std::span<const Pose> past_poses, double redundancy_radius) {
  FactorHits h;
  h.occlusion = context.occlusion_count > 0;
  h.light = context.backlit;
  const double r2 = redundancy_radius * redundancy_radius;
  for (const Pose& p : past_poses)
    if (squared_distance(pose, p) <= r2) h.redundancy = true;
  return h;
}

}  // namespace percept
