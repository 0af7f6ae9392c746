// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "percept/experiment.hpp"
#include "percept/factors.hpp"

using namespace percept;

namespace {

constexpr double pi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("criterion %d %-28s %s  %s\n", id, name, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

int threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// Parabola evaluated in a frame rotated so that the axis maps onto +y.
double reference_parabola(double px, double py, double ox, double oy, double axis, double delta,
                          double width, bool* near_edge) {
  const double a = pi / 2 - axis;
  const double dx = px - ox, dy = py - oy;
  const double x = std::cos(a) * dx - std::sin(a) * dy;
  const double y = std::sin(a) * dx + std::cos(a) * dy;
  *near_edge = std::abs(x * x / width - y) < 1e-9;
  return x * x / width < y ? 1.0 + delta * std::exp(-(x * x) / y) : 1.0;
}

void criterion_factors() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> coord(-10, 10), delta(0, 5), width(0.05, 5),
      angle(-pi, pi), sigma(0.05, 2);
  double worst = 0.0;
  bool in_range = true;
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const Pose pose(coord(rng), coord(rng), angle(rng));
    const Vec2 target(coord(rng), coord(rng));
    const Vec2 occ = target + 0.2 * Vec2(coord(rng), coord(rng));
    const FactorParams po{delta(rng), width(rng), 1.0};
    const FactorParams pl{delta(rng), width(rng), 1.0};
    const FactorParams pr{delta(rng), 1.0, sigma(rng)};
    const double dir = angle(rng);
    const Pose past(coord(rng), coord(rng), angle(rng));

    bool edge = false;
    const double ro = reference_parabola(pose.x, pose.y, occ.x(), occ.y(),
                                         std::atan2(occ.y() - target.y(), occ.x() - target.x()),
                                         po.delta, po.width, &edge);
    const double vo = occlusion_factor<double>(pose, occ, target, po);
    if (!edge) {
      worst = std::max(worst, std::abs(vo - ro) / ro);
      ++compared;
    }
    const double rl = reference_parabola(pose.x, pose.y, target.x(), target.y(), dir, pl.delta,
                                         pl.width, &edge);
    const double vl = light_factor<double>(pose, dir, target, pl);
    if (!edge) {
      worst = std::max(worst, std::abs(vl - rl) / rl);
      ++compared;
    }
    const double d2 = std::pow(pose.x - past.x, 2) + std::pow(pose.y - past.y, 2);
    const double rr = 1.0 + pr.delta * std::exp(-d2 / (2 * pr.sigma * pr.sigma));
    const double vr = redundancy_factor(pose, past, pr);
    worst = std::max(worst, std::abs(vr - rr) / rr);
    ++compared;
    in_range = in_range && vo >= 1 && vo <= 1 + po.delta && vl >= 1 && vl <= 1 + pl.delta &&
               vr >= 1 && vr <= 1 + pr.delta;
  }
  const double t = seconds_since(t0);
  std::ostringstream os;
  os << compared << " evaluations, max rel err " << worst << ", in [1,1+delta] " << in_range
     << ", " << t << " s";
  report(1, "factor oracle", worst <= 1e-12 && in_range && t < 1.0, os.str());
}

void criterion_estimators() {
  const auto model = RangeBearingModel<double>::from_sigmas(0.3, 0.1);
  const GaussianBelief<double> prior{Vec2(5, 4), Mat2{{0.3, 0.05}, {0.05, 0.2}}};
  const Pose pose(1, 1, 0.3);
  const Vec2 z(5.1, 0.35);

  const Mat2 h = model.jacobian(pose, prior.mean);
  const Mat2 s = h * prior.covariance * h.transpose() + model.base_covariance;
  const Mat2 k = prior.covariance * h.transpose() * s.inverse();
  Vec2 innov = z - model.observe(pose, prior.mean);
  innov(1) = wrap_angle(innov(1));
  const Vec2 mean = prior.mean + k * innov;
  const Mat2 cov = (Mat2::Identity() - k * h) * prior.covariance;
  const auto post = ekf_update<double>(prior, pose, z, model, 1.0);
  const double kalman_err = std::max((post.mean - mean).norm() / mean.norm(),
                                     (post.covariance - cov).cwiseAbs().maxCoeff() /
                                         cov.cwiseAbs().maxCoeff());

  const auto frozen = ekf_update<double>(prior, pose, z, model, 1e9);
  const CategoricalBelief<double> cprior{Eigen::Vector4d(0.4, 0.3, 0.2, 0.1)};
  const auto cfrozen =
      categorical_update<double>(cprior, Eigen::Vector4d(0.05, 0.05, 0.05, 0.85), 1e9);
  const double limit_err = std::max({(frozen.mean - prior.mean).cwiseAbs().maxCoeff(),
                                     (frozen.covariance - prior.covariance).cwiseAbs().maxCoeff(),
                                     (cfrozen.probs - cprior.probs).cwiseAbs().maxCoeff()});

  const auto half = categorical_update<double>(CategoricalBelief<double>{Eigen::Vector2d(0.5, 0.5)},
                                               Eigen::Vector2d(0.9, 0.1), 2.0);
  const double want = std::sqrt(0.9) / (std::sqrt(0.9) + std::sqrt(0.1));
  const double sqrt_err = std::abs(half.probs(0) - want) + std::abs(half.probs(0) - 0.75);

  std::ostringstream os;
  os << "kalman rel err " << kalman_err << ", psi=1e9 drift " << limit_err << ", psi=2 -> ("
     << half.probs(0) << ", " << half.probs(1) << ")";
  report(2, "estimator limits", kalman_err <= 1e-12 && limit_err <= 1e-6 && sqrt_err < 1e-12,
         os.str());
}

struct TaskBatch {
  BatchResult batch;
  double seconds{0.0};
};

ExperimentConfig desk_config(Task task, Method method) {
  ExperimentConfig c;
  c.task = task;
  c.method = method;
  c.num_envs = 10;
  c.steps = 50;
  return c;
}

TaskBatch run_pair(Task task) {
  const auto t0 = Clock::now();
  TaskBatch r;
  r.batch =
      run_batch({desk_config(task, Method::Basic), desk_config(task, Method::Complete)}, threads());
  r.seconds = seconds_since(t0);
  return r;
}

// Final-step metrics per seed for one method.
std::map<std::uint64_t, StepMetrics> final_step(const BatchResult& b, Method m) {
  std::map<std::uint64_t, StepMetrics> out;
  for (const RunOutcome& r : b.runs)
    if (r.method == m && r.log && !r.log->steps.empty()) out[r.seed] = r.log->steps.back().metrics;
  return out;
}

void criterion_consistency(const TaskBatch& metric) {
  const int seeds = 10, targets = WorldSpec{}.num_targets;
  const Band pooled = chi2_band(2, seeds * targets);
  const Band per_seed = chi2_band(2, targets);

  int in_band = 0, window = 0;
  for (const StepAggregate& a : metric.batch.steps)
    if (a.method == Method::Complete && a.step > 25) {
      ++window;
      in_band += pooled.contains(a.nees.mean);
    }
  int above = 0;
  for (const auto& [seed, m] : final_step(metric.batch, Method::Basic))
    above += m.nees_avg > per_seed.hi;

  std::ostringstream os;
  os << "complete " << in_band << "/" << window << " final steps in [" << pooled.lo << ", "
     << pooled.hi << "], basic above " << per_seed.hi << " in " << above << "/" << seeds
     << " seeds, " << metric.seconds << " s";
  report(3, "filter consistency",
         metric.batch.ok() && window == 25 && in_band >= 20 && above >= 7 && metric.seconds < 120,
         os.str());
}

void criterion_ordering(const TaskBatch& metric, const TaskBatch& semantic) {
  const auto mb = final_step(metric.batch, Method::Basic);
  const auto mc = final_step(metric.batch, Method::Complete);
  const auto sb = final_step(semantic.batch, Method::Basic);
  const auto sc = final_step(semantic.batch, Method::Complete);
  double rmse_b = 0, rmse_c = 0, conf_b = 0, conf_c = 0, acc_b = 0, acc_c = 0;
  int rmse_w = 0, conf_w = 0, acc_w = 0;
  for (const auto& [seed, b] : mb) {
    const StepMetrics& c = mc.at(seed);
    rmse_b += b.rmse / mb.size();
    rmse_c += c.rmse / mb.size();
    rmse_w += c.rmse <= b.rmse;
  }
  for (const auto& [seed, b] : sb) {
    const StepMetrics& c = sc.at(seed);
    conf_b += b.confidence_avg / sb.size();
    conf_c += c.confidence_avg / sb.size();
    acc_b += b.accuracy / sb.size();
    acc_c += c.accuracy / sb.size();
    conf_w += c.confidence_avg >= b.confidence_avg;
    acc_w += c.accuracy >= b.accuracy;
  }
  const bool complete_sets = mb.size() == 10 && mc.size() == 10 && sb.size() == 10 && sc.size() == 10;
  std::ostringstream os;
  os << "rmse " << rmse_c << " vs " << rmse_b << " (" << rmse_w << "/10), confidence " << conf_c
     << " vs " << conf_b << " (" << conf_w << "/10), accuracy " << acc_c << " vs " << acc_b
     << " (" << acc_w << "/10)";
  report(4, "error and accuracy ordering",
         complete_sets && rmse_c <= rmse_b && conf_c >= conf_b && acc_c >= acc_b && rmse_w >= 7 &&
             conf_w >= 7 && acc_w >= 7,
         os.str());
}

void criterion_avoidance(const TaskBatch& metric, const TaskBatch& semantic) {
  bool ok = true;
  std::ostringstream os;
  long basic_all = 0, complete_all = 0;
  for (const TaskBatch* t : {&metric, &semantic}) {
    long basic = 0, complete = 0;
    for (const HitAggregate& h : t->batch.hits) {
      if (h.method == Method::Basic) basic = h.hits.total();
      if (h.method == Method::Complete) complete = h.hits.total();
    }
    const double ratio = basic > 0 ? double(complete) / double(basic) : 1.0;
    ok = ok && basic > 0 && ratio <= 0.6;
    basic_all += basic;
    complete_all += complete;
    os << to_string(t->batch.hits.front().task) << " " << complete << "/" << basic << " = "
       << ratio << ", ";
  }
  os << "combined " << double(complete_all) / double(basic_all);
  report(5, "factor avoidance", ok, os.str());
}

void criterion_determinism() {
  bool identical = true, ablation = true;
  for (Task task : {Task::Metric, Task::Semantic})
    for (std::uint64_t seed : {0u, 7u}) {
      ExperimentConfig c = desk_config(task, Method::Complete);
      identical = identical && runlog_to_json(run_mission(c, seed)) == runlog_to_json(run_mission(c, seed));
      c.factors.occlusion_params.delta = 0.0;
      c.factors.light_params.delta = 0.0;
      c.factors.redundancy_params.delta = 0.0;
      ablation = ablation && runlog_to_json(run_mission(c, seed)) ==
                                 runlog_to_json(run_mission(desk_config(task, Method::Basic), seed));
    }
  ExperimentConfig c = desk_config(Task::Metric, Method::Complete);
  c.num_envs = 4;
  const bool parallel = metrics_csv(run_batch({c}, 1)) == metrics_csv(run_batch({c}, 4));
  std::ostringstream os;
  os << "reruns identical " << identical << ", delta=0 equals basic " << ablation
     << ", serial equals parallel " << parallel;
  report(6, "determinism", identical && ablation && parallel, os.str());
}

void criterion_calibration() {
  SensorConfig cfg;
  cfg.miss_per_gamma = 0.0;
  const Target t{0, Vec2(5, 0), 0.25, 1};
  double worst = 0.0;
  for (double gamma : {1.0, 3.0, 6.0}) {
    NoiseContext ctx;
    ctx.distance = 5.0;
    ctx.gamma = gamma;
    Rng rng = make_stream(11, "calibration", {std::uint64_t(gamma)});
    const int n = 10000;
    double sr = 0, srr = 0, sb = 0, sbb = 0;
    for (int i = 0; i < n; ++i) {
      const auto m = sample_metric(Pose(), t, ctx, cfg, rng);
      const double r = m.reading->range - 5.0, b = m.reading->bearing;
      sr += r;
      srr += r * r;
      sb += b;
      sbb += b * b;
    }
    const double std_r = std::sqrt((srr - sr * sr / n) / (n - 1));
    const double std_b = std::sqrt((sbb - sb * sb / n) / (n - 1));
    worst = std::max({worst, std::abs(std_r / (gamma * cfg.sigma_range) - 1),
                      std::abs(std_b / (gamma * cfg.sigma_bearing) - 1)});
  }

  const SensorConfig sem;
  Rng rng = make_stream(12, "simplex");
  std::uniform_real_distribution<double> dist(0, 15), gam(1, 6);
  int invalid = 0, valid = 0;
  for (int i = 0; i < 10000; ++i) {
    NoiseContext ctx;
    ctx.distance = dist(rng);
    ctx.gamma = gam(rng);
    const auto m = sample_semantic(Pose(), t, ctx, sem, rng);
    if (m.is_miss()) continue;
    const Eigen::VectorXd& c = *m.confidences;
    const bool ok = c.size() == sem.num_classes && c.minCoeff() >= 0 &&
                    std::abs(c.sum() - 1) < 1e-9 && c.allFinite();
    invalid += !ok;
    valid += ok;
  }
  std::ostringstream os;
  os << "max std deviation " << 100 * worst << "%, simplex samples " << valid << " valid, "
     << invalid << " invalid";
  report(7, "sensor calibration", worst < 0.05 && invalid == 0, os.str());
}

void criterion_performance() {
  const auto t0 = Clock::now();
  bool ok = true;
  for (Task task : {Task::Metric, Task::Semantic}) {
    std::vector<ExperimentConfig> configs;
    for (Method m : kAllMethods) {
      ExperimentConfig c;
      c.task = task;
      c.method = m;
      configs.push_back(c);
    }
    ok = ok && run_batch(configs, threads()).ok();
  }
  const double t = seconds_since(t0);
  const ExperimentConfig d;
  std::ostringstream os;
  os << "2 tasks x 5 methods x " << d.num_envs << " envs x " << d.steps << " steps x "
     << d.planner.num_candidates << " candidates x " << d.world.num_targets << " targets in " << t
     << " s on " << threads() << " threads";
  report(8, "performance", ok && t < 600, os.str());
}

}  // namespace

int main() {
  criterion_factors();
  criterion_estimators();
  const TaskBatch metric = run_pair(Task::Metric);
  const TaskBatch semantic = run_pair(Task::Semantic);
  criterion_consistency(metric);
  criterion_ordering(metric, semantic);
  criterion_avoidance(metric, semantic);
  criterion_determinism();
  criterion_calibration();
  criterion_performance();
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
