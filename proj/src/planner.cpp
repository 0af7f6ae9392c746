#include "percept/planner.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace percept {

void validate(const PlannerConfig& config) {
  if (config.horizon != 1) throw InvalidArgument("planner: only horizon 1 is supported");
  if (config.num_candidates <= 0) throw InvalidArgument("planner: num_candidates must be > 0");
  if (!(config.budget > 0.0)) throw InvalidArgument("planner: budget must be > 0");
}

std::vector<Pose> sample_candidates(const Pose& current, const PlannerConfig& config,
                                    const Bounds& bounds, Rng& rng) {
  validate(config);
  std::vector<Pose> out;
  out.reserve(config.num_candidates);
  const Vec2 origin = current.position();
  if (config.strategy == CandidateStrategy::FixedRing) {
    for (int k = 0; k < config.num_candidates; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / config.num_candidates;
      const Vec2 p =
          bounds.clamp(origin + config.budget * Vec2(std::cos(angle), std::sin(angle)));
      out.emplace_back(p.x(), p.y(), angle + std::numbers::pi);
    }
    return out;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int k = 0; k < config.num_candidates; ++k) {
    const double r = config.budget * std::sqrt(unit(rng));
    const double theta = angle(rng);
    const double heading = angle(rng);
    const Vec2 p = bounds.clamp(origin + r * Vec2(std::cos(theta), std::sin(theta)));
    out.emplace_back(p.x(), p.y(), heading);
  }
  return out;
}

double metric_target_utility(const GaussianBelief<double>& belief, const Pose& pose,
                             const RangeBearingModel<double>& model, double psi) {
  const Mat2 post = predicted_covariance(belief, pose, model, psi);
  return 0.5 * std::log(belief.covariance.determinant() / post.determinant());
}

double semantic_target_utility(const CategoricalBelief<double>& belief, double distance,
                               double psi, const SensorConfig& sensor, SemanticUtility mode) {
  require_psi(psi);
  const double alpha = 1.0 / psi;
  const Eigen::VectorXd& b = belief.probs;
  const double prior_entropy = categorical_entropy(b);

  if (mode == SemanticUtility::SelfFusion) {
    Eigen::VectorXd post = b.array().pow(1.0 + alpha);
    post /= post.sum();
    return prior_entropy - categorical_entropy(post);
  }

  // The nominal report for class c puts confidence c_d on c and q elsewhere,
  // so after tempering the likelihood of c given j is peak/norm or other/norm.
  const Eigen::Index k = b.size();
  if (k < 2) return 0.0;
  const double c = nominal_confidence(distance, sensor);
  const double q = (1.0 - c) / double(k - 1);
  const double peak = std::pow(c, alpha);
  const double other = std::pow(q, alpha);
  const double norm = peak + double(k - 1) * other;

  double expected_entropy = 0.0;
  Eigen::VectorXd post(k);
  for (Eigen::Index cls = 0; cls < k; ++cls) {
    post = b * other;
    post(cls) = b(cls) * peak;
    const double mass = post.sum();
    if (!(mass > 0.0)) continue;
    expected_entropy += (mass / norm) * categorical_entropy(post / mass);
  }
  return prior_entropy - expected_entropy;
}

CandidateScore score_candidate(const Pose& pose, const PlanningState& state,
                               const UtilityModel& model) {
  CandidateScore score;
  score.pose = pose;
  score.psi.reserve(state.maps.size());
  for (std::size_t i = 0; i < state.maps.size(); ++i) {
    const PerceptualMap& map = state.maps[i];
    const double psi = evaluate_map(map, pose, *state.world, state.history);
    score.psi.push_back(psi);
    if (state.task == Task::Metric) {
      if ((pose.position() - state.gaussian[i].mean).norm() < model.sensor.min_range) continue;
      score.utility += metric_target_utility(state.gaussian[i], pose, model.range_bearing, psi);
    } else {
      const double d = (pose.position() - map.anchor).norm();
      score.utility +=
          semantic_target_utility(state.categorical[i], d, psi, model.sensor, model.semantic);
    }
  }
  return score;
}

std::size_t select_best(std::span<const CandidateScore> scores, const Pose& current) {
  if (scores.empty()) throw InvalidArgument("planner: no candidates to select from");
  std::size_t best = 0;
  double best_travel = squared_distance(scores[0].pose, current);
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const double travel = squared_distance(scores[i].pose, current);
    if (scores[i].utility > scores[best].utility ||
        (scores[i].utility == scores[best].utility && travel < best_travel)) {
      best = i;
      best_travel = travel;
    }
  }
  return best;
}

PlanResult plan_over(std::span<const Pose> candidates, const PlanningState& state,
                     const UtilityModel& model) {
  PlanResult result;
  result.scores.reserve(candidates.size());
  for (const Pose& c : candidates) result.scores.push_back(score_candidate(c, state, model));
  result.chosen = select_best(result.scores, state.current);
  result.pose = result.scores[result.chosen].pose;
  return result;
}

PlanResult plan_step(const PlanningState& state, const PlannerConfig& config,
                     const UtilityModel& model, Rng& rng) {
  const std::vector<Pose> candidates =
      sample_candidates(state.current, config, state.world->bounds, rng);
  return plan_over(candidates, state, model);
}

}  // namespace percept
