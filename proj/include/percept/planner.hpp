#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "percept/estimators.hpp"
#include "percept/perceptual_map.hpp"
#include "percept/rng.hpp"
#include "percept/sensor.hpp"
#include "percept/world.hpp"

namespace percept {

enum class Task { Metric, Semantic };

enum class CandidateStrategy { RandomBall, FixedRing };

/// How the hypothetical semantic measurement of a candidate is formed.
enum class SemanticUtility {
  /// Mutual information between the class and a detector report drawn from
  /// the nominal distance-decay model, with the report tempered by 1/psi.
  ExpectedClass,
  /// The current belief is taken as the expected confidence vector and fused
  /// with itself at weight 1/psi.
  SelfFusion,
};

struct PlannerConfig {
  int horizon{1};
  int num_candidates{100};
  double budget{2.0};
  CandidateStrategy strategy{CandidateStrategy::RandomBall};
  SemanticUtility semantic_utility{SemanticUtility::ExpectedClass};
};

void validate(const PlannerConfig& config);

/// Candidate viewpoints reachable within the budget from `current`:
/// uniform in the disc of radius `budget` with uniform heading (random ball),
/// or `num_candidates` poses evenly spaced on the circle of radius `budget`
/// facing `current` (fixed ring). Positions are clamped to `bounds`.
std::vector<Pose> sample_candidates(const Pose& current, const PlannerConfig& config,
                                    const Bounds& bounds, Rng& rng);

/// What the planner knows when scoring: one map per target, plus the
/// beliefs of the active task.
struct PlanningState {
  Task task{Task::Metric};
  Pose current;
  const World* world{nullptr};
  std::span<const Pose> history;
  std::span<const PerceptualMap> maps;
  std::span<const GaussianBelief<double>> gaussian;
  std::span<const CategoricalBelief<double>> categorical;
};

struct UtilityModel {
  RangeBearingModel<double> range_bearing{RangeBearingModel<double>::from_sigmas(0.3, 0.1)};
  SensorConfig sensor;
  SemanticUtility semantic{SemanticUtility::ExpectedClass};
};

struct CandidateScore {
  Pose pose;
  double utility{0.0};  // summed expected entropy reduction, nats
  std::vector<double> psi;
};

/// Entropy reduction of one Gaussian target measured from `pose` with cost psi.
double metric_target_utility(const GaussianBelief<double>& belief, const Pose& pose,
                             const RangeBearingModel<double>& model, double psi);

/// Expected entropy reduction of one categorical target at `distance`.
double semantic_target_utility(const CategoricalBelief<double>& belief, double distance,
                               double psi, const SensorConfig& sensor, SemanticUtility mode);

CandidateScore score_candidate(const Pose& pose, const PlanningState& state,
                               const UtilityModel& model);

/// Index of the best score: highest utility, then smallest travel distance
/// from `current`, then lowest index.
std::size_t select_best(std::span<const CandidateScore> scores, const Pose& current);

struct PlanResult {
  std::size_t chosen{0};
  Pose pose;
  std::vector<CandidateScore> scores;
};

/// One greedy planning step with horizon 1.
PlanResult plan_step(const PlanningState& state, const PlannerConfig& config,
                     const UtilityModel& model, Rng& rng);

/// Scores an explicit candidate set (used by plan_step and for fixed sets).
PlanResult plan_over(std::span<const Pose> candidates, const PlanningState& state,
                     const UtilityModel& model);

}  // namespace percept
