#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "percept/geometry.hpp"
#include "percept/rng.hpp"
#include "percept/world.hpp"

namespace percept {

/// Constants of the simulated detector. Defaults are fits to qualitative
/// trends of a real detector and can be re-fit from the scenario config.
struct SensorConfig {
  // metric sensor
  double sigma_range{0.3};
  double sigma_bearing{0.1};
  /// Targets closer than this are not detected (near-field blind zone).
  double min_range{1.0};

  // noise scale: gamma = clamp(1 + per_depth * depth + backlit_increment * backlit, 1, max)
  double gamma_per_depth{2.0};
  double gamma_backlit{1.0};
  double gamma_max{6.0};
  /// Half-angle of the viewing cone (around the light direction, seen from
  /// the target) in which a lit target appears back-lit.
  double backlit_half_angle{0.7853981633974483};

  // detection misses: p = min(miss_per_gamma * gamma, miss_max)
  double miss_per_gamma{0.05};
  double miss_max{0.5};

  // semantic sensor
  int num_classes{4};
  double confidence_max{0.95};
  double confidence_min{0.3};
  double confidence_slope{0.0475};  // per meter; halves the confidence over 10 m
  double confidence_noise{0.05};    // std per unit gamma, added to every class
  double outlier_per_gamma{0.05};
  double outlier_max{0.5};
  double misclass_distance{0.5};
  double misclass_mass{0.8};
  double confidence_floor{0.01};
};

/// Ground-truth effects acting on one (pose, target) measurement.
struct NoiseContext {
  int occlusion_count{0};
  std::vector<double> occlusion_depth;  // per blocking occluder, in [0, 1]
  bool backlit{false};
  double distance{0.0};
  double gamma{1.0};

  double total_depth() const;
};

struct MetricMeasurement {
  int target{0};
  std::optional<RangeBearing<double>> reading;  // empty on a miss

  bool is_miss() const { return !reading.has_value(); }
};

struct SemanticMeasurement {
  int target{0};
  std::optional<Eigen::VectorXd> confidences;  // empty on a miss

  bool is_miss() const { return !confidences.has_value(); }
};

/// Fraction of the target's angular extent covered by the occluder, as seen
/// from `viewpoint`. Zero unless the occluder is closer than the target.
double occlusion_depth(const Vec2& viewpoint, const Target& target, const Occluder& occluder);

/// True when the target is lit by `light` and the viewpoint looks into it.
bool is_backlit(const Vec2& viewpoint, const Target& target, const LightSource& light,
                const SensorConfig& config);

double noise_gamma(double total_depth, bool backlit, const SensorConfig& config);
double miss_probability(double gamma, const SensorConfig& config);
double outlier_probability(double gamma, const SensorConfig& config);

NoiseContext ground_truth_context(const Pose& pose, const Target& target, const World& world,
                                  const SensorConfig& config);

MetricMeasurement sample_metric(const Pose& pose, const Target& target,
                                const NoiseContext& context, const SensorConfig& config, Rng& rng);

/// Noise-free true-class confidence at `distance` (linear decay with floor).
double nominal_confidence(double distance, const SensorConfig& config);

/// Noise-free confidence vector peaked at `peak_class`.
Eigen::VectorXd nominal_confidences(int peak_class, double distance, const SensorConfig& config);

SemanticMeasurement sample_semantic(const Pose& pose, const Target& target,
                                    const NoiseContext& context, const SensorConfig& config,
                                    Rng& rng);

}  // namespace percept
