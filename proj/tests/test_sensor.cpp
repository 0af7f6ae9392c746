#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "percept/sensor.hpp"

using namespace percept;
constexpr double pi = std::numbers::pi;

namespace {

struct Moments {
  double mean{0.0};
  double std{0.0};
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= double(v.size());
  for (double x : v) m.std += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(m.std / double(v.size() - 1));
  return m;
}

NoiseContext context(double distance, double gamma) {
  NoiseContext c;
  c.distance = distance;
  c.gamma = gamma;
  return c;
}

double mean_true_confidence(double distance, double gamma, const SensorConfig& cfg, int n) {
  Target t;
  t.true_class = 2;
  t.position = Vec2(distance, 0);
  Rng rng = make_stream(17, "mono", {std::uint64_t(distance * 100), std::uint64_t(gamma * 10)});
  double sum = 0.0;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    const auto m = sample_semantic(Pose(), t, context(distance, gamma), cfg, rng);
    if (m.is_miss()) continue;
    sum += (*m.confidences)(t.true_class);
    ++used;
  }
  return sum / used;
}

}  // namespace

TEST_CASE("gamma schedule") {
  const SensorConfig cfg;
  CHECK(noise_gamma(0.0, false, cfg) == 1.0);
  CHECK(noise_gamma(1.0, false, cfg) == doctest::Approx(1.0 + cfg.gamma_per_depth));
  CHECK(noise_gamma(0.0, true, cfg) == doctest::Approx(1.0 + cfg.gamma_backlit));
  CHECK(noise_gamma(10.0, true, cfg) == cfg.gamma_max);
  for (double d = 0.0; d < 4.0; d += 0.1)
    for (bool b : {false, true}) {
      const double g = noise_gamma(d, b, cfg);
      CHECK(g >= 1.0);
      CHECK(g <= 6.0);
    }
}

TEST_CASE("ground truth context on a clear line of sight") {
  World w;
  w.targets.push_back({0, Vec2(5, 5), 0.25, 0});
  w.occluders.push_back({0, Vec2(8, 8), 0.25});
  const auto ctx = ground_truth_context(Pose(1, 5, 0), w.targets[0], w, SensorConfig{});
  CHECK(ctx.occlusion_count == 0);
  CHECK_FALSE(ctx.backlit);
  CHECK(ctx.gamma == 1.0);
  CHECK(ctx.distance == doctest::Approx(4.0));
}

TEST_CASE("full occlusion by one disc") {
  const SensorConfig cfg;
  World w;
  w.targets.push_back({0, Vec2(4, 0), 0.25, 0});
  w.occluders.push_back({0, Vec2(2, 0), 0.25});
  CHECK(occlusion_depth(Vec2(0, 0), w.targets[0], w.occluders[0]) == doctest::Approx(1.0));
  const auto ctx = ground_truth_context(Pose(0, 0, 0), w.targets[0], w, cfg);
  CHECK(ctx.occlusion_count == 1);
  CHECK(ctx.gamma == doctest::Approx(1.0 + cfg.gamma_per_depth));
}

TEST_CASE("occlusion depth geometry") {
  const Target t{0, Vec2(4, 0), 0.25, 0};
  // occluder behind the target or off to the side does not block
  CHECK(occlusion_depth(Vec2(0, 0), t, {0, Vec2(6, 0), 0.25}) == 0.0);
  CHECK(occlusion_depth(Vec2(0, 0), t, {0, Vec2(2, 2), 0.25}) == 0.0);
  // viewpoint inside the occluder disc
  CHECK(occlusion_depth(Vec2(0, 0), t, {0, Vec2(0.1, 0), 0.25}) == 1.0);
  // partial occlusion grows as the occluder slides onto the line of sight
  double prev = 0.0;
  for (int i = 10; i >= 0; --i) {
    const double y = 0.05 * i;
    const double d = occlusion_depth(Vec2(0, 0), t, {0, Vec2(2, y), 0.1});
    CHECK(d >= prev - 1e-12);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    prev = d;
  }
  CHECK(prev > 0.5);
}

TEST_CASE("back lighting") {
  const SensorConfig cfg;
  Target t{0, Vec2(5, 5), 0.25, 0};
  LightSource l;
  l.position = Vec2(2, 5);
  l.direction = 0.0;
  // the robot on the far side looks into the light past the target
  CHECK(is_backlit(Vec2(8, 5), t, l, cfg));
  CHECK(is_backlit(Vec2(8, 6), t, l, cfg));
  CHECK_FALSE(is_backlit(Vec2(3, 5), t, l, cfg));
  CHECK_FALSE(is_backlit(Vec2(5, 8), t, l, cfg));
  // target outside the emission cone
  l.direction = pi;
  CHECK_FALSE(is_backlit(Vec2(0, 5), t, l, cfg));

  World w;
  w.targets.push_back(t);
  l.direction = 0.0;
  w.lights.push_back(l);
  const auto ctx = ground_truth_context(Pose(8, 5, 0), t, w, cfg);
  CHECK(ctx.backlit);
  CHECK(ctx.gamma == doctest::Approx(1.0 + cfg.gamma_backlit));
}

TEST_CASE("metric noise std scales with gamma") {
  SensorConfig cfg;
  cfg.miss_per_gamma = 0.0;
  const Target t{0, Vec2(5, 0), 0.25, 0};
  for (double gamma : {1.0, 3.0, 6.0}) {
    Rng rng = make_stream(1, "calibration", {std::uint64_t(gamma)});
    std::vector<double> r, b;
    for (int i = 0; i < 10000; ++i) {
      const auto m = sample_metric(Pose(0, 0, 0), t, context(5.0, gamma), cfg, rng);
      REQUIRE_FALSE(m.is_miss());
      r.push_back(m.reading->range - 5.0);
      b.push_back(m.reading->bearing);
    }
    const Moments mr = moments(r), mb = moments(b);
    CHECK(std::abs(mr.std / (gamma * cfg.sigma_range) - 1.0) < 0.05);
    CHECK(std::abs(mb.std / (gamma * cfg.sigma_bearing) - 1.0) < 0.05);
    CHECK(std::abs(mr.mean) < 4 * gamma * cfg.sigma_range / 100.0);
  }
}

TEST_CASE("zero noise returns the truth") {
  SensorConfig cfg;
  cfg.sigma_range = cfg.sigma_bearing = 0.0;
  cfg.miss_per_gamma = 0.0;
  const Target t{0, Vec2(4, 5), 0.25, 0};
  Rng rng = make_stream(1, "exact");
  const auto m = sample_metric(Pose(1, 1, 0.3), t, context(5.0, 1.0), cfg, rng);
  REQUIRE_FALSE(m.is_miss());
  CHECK(m.reading->range == doctest::Approx(5.0));
  CHECK(m.reading->bearing == doctest::Approx(std::atan2(4.0, 3.0) - 0.3));
}

TEST_CASE("miss probability") {
  const SensorConfig cfg;
  CHECK(miss_probability(1.0, cfg) == doctest::Approx(cfg.miss_per_gamma));
  double prev = 0.0;
  for (double g = 1.0; g <= 6.0; g += 0.25) {
    CHECK(miss_probability(g, cfg) >= prev);
    prev = miss_probability(g, cfg);
  }
  const Target t{0, Vec2(5, 0), 0.25, 0};
  for (double gamma : {1.0, 4.0}) {
    Rng rng = make_stream(2, "miss", {std::uint64_t(gamma)});
    const int n = 20000;
    int misses = 0;
    for (int i = 0; i < n; ++i)
      misses += sample_metric(Pose(), t, context(5.0, gamma), cfg, rng).is_miss();
    const double p = miss_probability(gamma, cfg);
    CHECK(std::abs(double(misses) / n - p) < 4.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("targets inside the blind zone are missed") {
  SensorConfig cfg;
  cfg.miss_per_gamma = 0.0;
  cfg.min_range = 1.0;
  const Target t{0, Vec2(0.5, 0), 0.25, 0};
  Rng rng = make_stream(3, "near");
  CHECK(sample_metric(Pose(), t, context(0.5, 1.0), cfg, rng).is_miss());
}

TEST_CASE("semantic samples are valid simplex points") {
  const SensorConfig cfg;
  Rng rng = make_stream(4, "simplex");
  std::uniform_real_distribution<double> dist(0.0, 15.0), gam(1.0, 6.0);
  std::uniform_int_distribution<int> cls(0, cfg.num_classes - 1);
  int valid = 0;
  for (int i = 0; i < 10000; ++i) {
    Target t;
    t.true_class = cls(rng);
    const auto m = sample_semantic(Pose(), t, context(dist(rng), gam(rng)), cfg, rng);
    if (m.is_miss()) continue;
    const Eigen::VectorXd& c = *m.confidences;
    REQUIRE(c.size() == cfg.num_classes);
    REQUIRE(c.minCoeff() >= 0.0);
    REQUIRE(std::abs(c.sum() - 1.0) < 1e-9);
    ++valid;
  }
  CHECK(valid > 5000);
}

TEST_CASE("noise-free semantic reading follows the decay curve") {
  SensorConfig cfg;
  cfg.confidence_noise = 0.0;
  cfg.outlier_per_gamma = 0.0;
  cfg.miss_per_gamma = 0.0;
  Target t;
  t.true_class = 1;
  Rng rng = make_stream(5, "curve");
  const auto m = sample_semantic(Pose(), t, context(2.0, 1.0), cfg, rng);
  const double c = 0.95 - 0.0475 * 2.0;
  CHECK((*m.confidences)(1) == doctest::Approx(c));
  CHECK((*m.confidences)(0) == doctest::Approx((1 - c) / 3));
  CHECK(nominal_confidence(10.0, cfg) == doctest::Approx(0.475));
  CHECK(nominal_confidence(100.0, cfg) == doctest::Approx(cfg.confidence_min));
  const Eigen::VectorXd far = nominal_confidences(0, 100.0, cfg);
  CHECK(far.maxCoeff() - far.minCoeff() < 0.1);
}

TEST_CASE("near-field band misclassifies deterministically") {
  const SensorConfig cfg;
  Target t;
  t.true_class = 3;
  Rng rng = make_stream(6, "near");
  int seen = 0;
  for (int i = 0; i < 200; ++i) {
    const auto m = sample_semantic(Pose(), t, context(0.3, 1.0), cfg, rng);
    if (m.is_miss()) continue;
    ++seen;
    CHECK((*m.confidences)(0) == doctest::Approx(cfg.misclass_mass));
  }
  CHECK(seen > 150);
}

TEST_CASE("expected true-class confidence is monotone") {
  const SensorConfig cfg;
  const int n = 20000;
  for (double gamma : {1.0, 3.0, 6.0}) {
    double prev = 2.0;
    for (double d : {1.0, 3.0, 6.0, 9.0, 13.0}) {
      const double c = mean_true_confidence(d, gamma, cfg, n);
      CHECK(c <= prev + 0.005);
      prev = c;
    }
  }
  for (double d : {1.0, 5.0, 10.0}) {
    double prev = 2.0;
    for (double gamma : {1.0, 2.0, 4.0, 6.0}) {
      const double c = mean_true_confidence(d, gamma, cfg, n);
      CHECK(c <= prev + 0.005);
      prev = c;
    }
  }
}

TEST_CASE("samplers are deterministic per stream") {
  const SensorConfig cfg;
  const Target t{0, Vec2(3, 4), 0.25, 1};
  Rng a = make_stream(9, "sense", {1, 0});
  Rng b = make_stream(9, "sense", {1, 0});
  for (int i = 0; i < 50; ++i) {
    const auto ma = sample_metric(Pose(), t, context(5.0, 2.0), cfg, a);
    const auto mb = sample_metric(Pose(), t, context(5.0, 2.0), cfg, b);
    REQUIRE(ma.is_miss() == mb.is_miss());
    if (!ma.is_miss()) {
      CHECK(ma.reading->range == mb.reading->range);
      CHECK(ma.reading->bearing == mb.reading->bearing);
    }
    const auto sa = sample_semantic(Pose(), t, context(5.0, 2.0), cfg, a);
    const auto sb = sample_semantic(Pose(), t, context(5.0, 2.0), cfg, b);
    REQUIRE(sa.is_miss() == sb.is_miss());
    if (!sa.is_miss()) CHECK(*sa.confidences == *sb.confidences);
  }
}
