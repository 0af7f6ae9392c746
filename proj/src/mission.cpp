#include <numbers>
#include <random>

#include <json.hpp>

#include "percept/experiment.hpp"
#include "percept/rng.hpp"

namespace percept {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Basic: return "basic";
    case Method::Occlusions: return "occlusions";
    case Method::Light: return "light";
    case Method::PreviousPoses: return "previous-poses";
    case Method::Complete: return "complete";
  }
  return "?";
}

std::string_view to_string(Task t) { return t == Task::Metric ? "metric" : "semantic"; }

Method parse_method(std::string_view s) {
  for (Method m : kAllMethods)
    if (to_string(m) == s) return m;
  throw InvalidArgument("unknown method '" + std::string(s) + "'");
}

Task parse_task(std::string_view s) {
  if (s == "metric") return Task::Metric;
  if (s == "semantic") return Task::Semantic;
  throw InvalidArgument("unknown task '" + std::string(s) + "'");
}

MapOptions map_options_for(Method method, MapOptions base) {
  base.occlusion = method == Method::Occlusions || method == Method::Complete;
  base.light = method == Method::Light || method == Method::Complete;
  base.redundancy = method == Method::PreviousPoses || method == Method::Complete;
  return base;
}

std::vector<std::uint64_t> ExperimentConfig::seed_list() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  for (int i = 0; i < num_envs; ++i) out.push_back(static_cast<std::uint64_t>(i));
  return out;
}

void validate(const ExperimentConfig& c) {
  if (c.steps < 0) throw InvalidArgument("config: steps must be >= 0");
  if (c.seeds.empty() && c.num_envs < 1) throw InvalidArgument("config: num_envs must be >= 1");
  if (!(c.prior_sigma > 0.0)) throw InvalidArgument("config: prior_sigma must be > 0");
  if (c.sensor.num_classes != c.world.num_classes)
    throw InvalidArgument("config: sensor and world class counts differ");
  if (c.sensor.sigma_range < 0.0 || c.sensor.sigma_bearing < 0.0)
    throw InvalidArgument("config: sensor sigmas must be >= 0");
  if (c.no_object_class < 0 || c.no_object_class >= c.world.num_classes)
    throw InvalidArgument("config: no_object_class out of range");
  validate(c.planner);
  validate(c.factors.occlusion_params);
  validate(c.factors.light_params);
  validate(c.factors.redundancy_params);
  if (c.factors.occlusion_width && !(*c.factors.occlusion_width > 0.0))
    throw InvalidArgument("config: occlusion width must be > 0");
}

MissionSetup setup_mission(const ExperimentConfig& config, std::uint64_t seed) {
  MissionSetup s;
  s.world = generate_world(seed, config.world);

  Rng start_rng = make_stream(seed, "start");
  const Bounds& b = s.world.bounds;
  std::uniform_real_distribution<double> xs(b.min.x(), b.max.x());
  std::uniform_real_distribution<double> ys(b.min.y(), b.max.y());
  std::uniform_real_distribution<double> hs(-std::numbers::pi, std::numbers::pi);
  const double x = xs(start_rng);
  const double y = ys(start_rng);
  s.start = Pose(x, y, hs(start_rng));

  const double var = config.prior_sigma * config.prior_sigma;
  for (std::size_t i = 0; i < s.world.targets.size(); ++i) {
    Rng prior_rng = make_stream(seed, "prior", {i});
    std::normal_distribution<double> normal(0.0, 1.0);
    const double ex = normal(prior_rng);
    const double ey = normal(prior_rng);
    GaussianBelief<double> g;
    g.mean = s.world.targets[i].position + config.prior_sigma * Vec2(ex, ey);
    g.covariance = var * Mat2::Identity();
    s.gaussian.push_back(g);
    s.categorical.push_back(CategoricalBelief<double>::uniform(config.world.num_classes));
  }
  return s;
}

namespace {

StepMetrics evaluate_step(int step, Task task, const World& world,
                          const std::vector<GaussianBelief<double>>& gaussian,
                          const std::vector<CategoricalBelief<double>>& categorical) {
  StepMetrics m;
  m.step = step;
  if (world.targets.empty()) return m;
  if (task == Task::Metric) {
    std::vector<Vec2> truths;
    double sum = 0.0;
    for (std::size_t i = 0; i < world.targets.size(); ++i) {
      truths.push_back(world.targets[i].position);
      sum += nees(gaussian[i], world.targets[i].position);
    }
    m.nees_avg = sum / double(world.targets.size());
    m.rmse = rmse(gaussian, truths);
  } else {
    std::vector<int> truths;
    for (const Target& t : world.targets) truths.push_back(t.true_class);
    const SemanticScores s = semantic_scores(categorical, truths);
    m.confidence_avg = s.confidence_avg;
    m.accuracy = s.accuracy;
  }
  return m;
}

Eigen::VectorXd no_object_observation(const ExperimentConfig& c) {
  const int k = c.world.num_classes;
  if (k == 1) return Eigen::VectorXd::Ones(1);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(k, (1.0 - c.no_object_confidence) / (k - 1));
  v(c.no_object_class) = c.no_object_confidence;
  return v;
}

}  // namespace

RunLog run_mission(const ExperimentConfig& config, std::uint64_t seed,
                   std::vector<PlanTrace>* traces) {
  validate(config);
  MissionSetup setup = setup_mission(config, seed);
  const World& world = setup.world;
  auto& gaussian = setup.gaussian;
  auto& categorical = setup.categorical;

  const MapOptions options = map_options_for(config.method, config.factors);
  UtilityModel model;
  model.range_bearing =
      RangeBearingModel<double>::from_sigmas(config.sensor.sigma_range, config.sensor.sigma_bearing);
  model.sensor = config.sensor;
  model.semantic = config.planner.semantic_utility;
  const double redundancy_radius = config.factors.redundancy_params.sigma;

  RunLog log;
  log.task = config.task;
  log.seed = seed;
  log.start = setup.start;
  log.prior = evaluate_step(0, config.task, world, gaussian, categorical);

  std::vector<Pose> history{setup.start};
  Pose current = setup.start;
  const std::size_t n = world.targets.size();

  for (int step = 1; step <= config.steps; ++step) {
    try {
      std::vector<PerceptualMap> maps;
      maps.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 anchor =
            config.task == Task::Metric ? gaussian[i].mean : world.targets[i].position;
        maps.push_back(build_map(world, i, anchor, history.size(), options));
      }

      PlanningState state;
      state.task = config.task;
      state.current = current;
      state.world = &world;
      state.history = history;
      state.maps = maps;
      state.gaussian = gaussian;
      state.categorical = categorical;

      Rng candidate_rng = make_stream(seed, "candidates", {std::uint64_t(step)});
      PlanResult plan = plan_step(state, config.planner, model, candidate_rng);
      const Pose pose = plan.pose;
      const std::vector<double>& psi = plan.scores[plan.chosen].psi;

      StepRecord rec;
      rec.step = step;
      rec.pose = pose;
      for (std::size_t i = 0; i < n; ++i) {
        if (!config.measure_all_targets && i != std::size_t(step - 1) % n) continue;
        const Target& target = world.targets[i];
        const NoiseContext ctx = ground_truth_context(pose, target, world, config.sensor);
        Rng sense_rng = make_stream(seed, "sense", {std::uint64_t(step), i});

        TargetRecord tr;
        tr.target = target.id;
        tr.psi = psi[i];
        tr.gamma = ctx.gamma;
        tr.hits = factor_hits(ctx, pose, history, redundancy_radius);
        if (config.task == Task::Metric) {
          const MetricMeasurement z = sample_metric(pose, target, ctx, config.sensor, sense_rng);
          tr.miss = z.is_miss();
          if (!tr.miss) tr.reading = {z.reading->range, z.reading->bearing};
          gaussian[i] = ekf_update(gaussian[i], pose, z, model.range_bearing, tr.psi);
        } else {
          SemanticMeasurement z = sample_semantic(pose, target, ctx, config.sensor, sense_rng);
          tr.miss = z.is_miss();
          if (tr.miss && config.fuse_miss_as_no_object) z.confidences = no_object_observation(config);
          if (z.confidences)
            tr.reading.assign(z.confidences->data(), z.confidences->data() + z.confidences->size());
          categorical[i] = categorical_update(categorical[i], z, tr.psi);
        }
        tr.gaussian = gaussian[i];
        tr.categorical = categorical[i];
        rec.metrics.hits.add(tr.hits);
        rec.targets.push_back(std::move(tr));
      }
      const HitCounts hits = rec.metrics.hits;
      rec.metrics = evaluate_step(step, config.task, world, gaussian, categorical);
      rec.metrics.hits = hits;

      if (traces) traces->push_back({step, plan.chosen, std::move(plan.scores)});
      history.push_back(pose);
      current = pose;
      log.steps.push_back(std::move(rec));
    } catch (const Error& e) {
      throw Error("step " + std::to_string(step) + ": " + e.what());
    }
  }
  return log;
}

std::string runlog_to_json(const RunLog& log) {
  using nlohmann::json;
  auto pose = [](const Pose& p) { return json::array({p.x, p.y, p.heading}); };
  auto metrics = [](const StepMetrics& m) {
    return json{{"step", m.step},
                {"nees_avg", m.nees_avg},
                {"rmse", m.rmse},
                {"confidence_avg", m.confidence_avg},
                {"accuracy", m.accuracy},
                {"hits", {m.hits.occlusion, m.hits.light, m.hits.redundancy}}};
  };
  json j;
  j["task"] = to_string(log.task);
  j["seed"] = log.seed;
  j["start"] = pose(log.start);
  j["prior"] = metrics(log.prior);
  j["steps"] = json::array();
  for (const StepRecord& s : log.steps) {
    json js{{"step", s.step}, {"pose", pose(s.pose)}, {"metrics", metrics(s.metrics)}};
    js["targets"] = json::array();
    for (const TargetRecord& t : s.targets) {
      json jt{{"target", t.target},
              {"miss", t.miss},
              {"reading", t.reading},
              {"psi", t.psi},
              {"gamma", t.gamma},
              {"hits", {t.hits.occlusion, t.hits.light, t.hits.redundancy}}};
      if (log.task == Task::Metric) {
        const Mat2& p = t.gaussian.covariance;
        jt["mean"] = {t.gaussian.mean.x(), t.gaussian.mean.y()};
        jt["covariance"] = {p(0, 0), p(0, 1), p(1, 0), p(1, 1)};
      } else {
        jt["probs"] = std::vector<double>(t.categorical.probs.data(),
                                          t.categorical.probs.data() + t.categorical.probs.size());
      }
      js["targets"].push_back(std::move(jt));
    }
    j["steps"].push_back(std::move(js));
  }
  return j.dump();
}

}  // namespace percept
