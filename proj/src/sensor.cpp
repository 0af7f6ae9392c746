#include "percept/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "percept/perceptual_map.hpp"

namespace percept {

double NoiseContext::total_depth() const {
  return std::accumulate(occlusion_depth.begin(), occlusion_depth.end(), 0.0);
}

double occlusion_depth(const Vec2& viewpoint, const Target& target, const Occluder& occluder) {
  const Vec2 to_target = target.position - viewpoint;
  const Vec2 to_occluder = occluder.position - viewpoint;
  const double range = to_target.norm();
  const double s = to_occluder.norm();
  if (s <= occluder.radius) return 1.0;
  if (s >= range) return 0.0;

  const double half_target =
      range <= target.radius ? std::numbers::pi / 2 : std::asin(target.radius / range);
  const double half_occluder = std::asin(occluder.radius / s);
  const double offset = std::abs(wrap_angle(std::atan2(to_occluder.y(), to_occluder.x()) -
                                            std::atan2(to_target.y(), to_target.x())));
  const double overlap = std::min(half_target, offset + half_occluder) -
                         std::max(-half_target, offset - half_occluder);
  return std::clamp(overlap / (2.0 * half_target), 0.0, 1.0);
}

bool is_backlit(const Vec2& viewpoint, const Target& target, const LightSource& light,
                const SensorConfig& config) {
  if (!illuminates(light, target.position)) return false;
  const Vec2 d = viewpoint - target.position;
  if (d.squaredNorm() == 0.0) return false;
  return std::abs(wrap_angle(std::atan2(d.y(), d.x()) - light.direction)) <=
         config.backlit_half_angle;
}

double noise_gamma(double total_depth, bool backlit, const SensorConfig& config) {
  const double g =
      1.0 + config.gamma_per_depth * total_depth + (backlit ? config.gamma_backlit : 0.0);
  return std::clamp(g, 1.0, config.gamma_max);
}

double miss_probability(double gamma, const SensorConfig& config) {
  return std::min(config.miss_per_gamma * gamma, config.miss_max);
}

double outlier_probability(double gamma, const SensorConfig& config) {
  return std::min(config.outlier_per_gamma * gamma, config.outlier_max);
}

NoiseContext ground_truth_context(const Pose& pose, const Target& target, const World& world,
                                  const SensorConfig& config) {
  NoiseContext ctx;
  const Vec2 v = pose.position();
  ctx.distance = (target.position - v).norm();
  for (const Occluder& o : world.occluders) {
    const double depth = occlusion_depth(v, target, o);
    if (depth > 0.0) {
      ++ctx.occlusion_count;
      ctx.occlusion_depth.push_back(depth);
    }
  }
  ctx.backlit = std::any_of(world.lights.begin(), world.lights.end(), [&](const LightSource& l) {
    return is_backlit(v, target, l, config);
  });
  ctx.gamma = noise_gamma(ctx.total_depth(), ctx.backlit, config);
  return ctx;
}

MetricMeasurement sample_metric(const Pose& pose, const Target& target,
                                const NoiseContext& context, const SensorConfig& config, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double u_miss = unit(rng);
  const double n_range = normal(rng);
  const double n_bearing = normal(rng);

  MetricMeasurement m;
  m.target = target.id;
  if (u_miss < miss_probability(context.gamma, config)) return m;
  if (context.distance < config.min_range) return m;
  const auto truth = relative_range_bearing(pose, target.position);
  m.reading = RangeBearing<double>{
      std::max(0.0, truth.range + context.gamma * config.sigma_range * n_range),
      wrap_angle(truth.bearing + context.gamma * config.sigma_bearing * n_bearing)};
  return m;
}

double nominal_confidence(double distance, const SensorConfig& config) {
  return std::clamp(config.confidence_max - config.confidence_slope * distance,
                    config.confidence_min, 1.0);
}

Eigen::VectorXd nominal_confidences(int peak_class, double distance, const SensorConfig& config) {
  const int k = config.num_classes;
  if (k == 1) return Eigen::VectorXd::Ones(1);
  const double c = nominal_confidence(distance, config);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(k, (1.0 - c) / (k - 1));
  v(peak_class) = c;
  return v;
}

SemanticMeasurement sample_semantic(const Pose& pose, const Target& target,
                                    const NoiseContext& context, const SensorConfig& config,
                                    Rng& rng) {
  (void)pose;
  const int k = config.num_classes;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double u_miss = unit(rng);
  const double u_outlier = unit(rng);
  const int wrong_offset = k > 1 ? 1 + static_cast<int>(unit(rng) * (k - 1)) % (k - 1) : 0;
  Eigen::VectorXd noise(k);
  for (int i = 0; i < k; ++i) noise(i) = normal(rng);

  SemanticMeasurement m;
  m.target = target.id;
  if (u_miss < miss_probability(context.gamma, config)) return m;

  if (k > 1 && context.distance < config.misclass_distance) {
    Eigen::VectorXd v = Eigen::VectorXd::Constant(k, (1.0 - config.misclass_mass) / (k - 1));
    v((target.true_class + 1) % k) = config.misclass_mass;
    m.confidences = v;
    return m;
  }

  int peak = target.true_class;
  if (k > 1 && u_outlier < outlier_probability(context.gamma, config))
    peak = (target.true_class + wrong_offset) % k;
  Eigen::VectorXd v = nominal_confidences(peak, context.distance, config);
  v += (context.gamma * config.confidence_noise) * noise;
  v = v.cwiseMax(config.confidence_floor);
  m.confidences = v / v.sum();
  return m;
}

}  // namespace percept
