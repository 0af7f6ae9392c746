// Command line front end: run / batch / characterize / rasterize.

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "percept/experiment.hpp"

namespace {

using namespace percept;

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      out.push_back(std::stoull(part));
    } else {
      const auto lo = std::stoull(part.substr(0, dash));
      const auto hi = std::stoull(part.substr(dash + 1));
      if (hi < lo) throw InvalidArgument("bad seed range '" + part + "'");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    }
  }
  if (out.empty()) throw InvalidArgument("empty seed list");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
}

struct CommonOptions {
  std::string config_path;
  std::string task;
  std::vector<std::string> methods;
  std::string seeds;
  int steps{-1};
  int candidates{-1};
  double budget{-1.0};
  std::string out{"results"};
  int parallelism{0};
};

void add_common(CLI::App* app, CommonOptions& o, bool multi_method) {
  app->add_option("--config", o.config_path, "JSON experiment config");
  app->add_option("--task", o.task, "metric | semantic");
  if (multi_method)
    app->add_option("--method", o.methods,
                    "basic | occlusions | light | previous-poses | complete (repeatable; default all)");
  else
    app->add_option("--method", o.methods, "basic | occlusions | light | previous-poses | complete")
        ->expected(1);
  app->add_option("--seeds", o.seeds, "seed list, e.g. 0-49 or 1,4,7");
  app->add_option("--steps", o.steps, "mission steps");
  app->add_option("--candidates", o.candidates, "candidate viewpoints per step");
  app->add_option("--budget", o.budget, "per-step travel budget [m]");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--parallelism", o.parallelism, "worker threads (0 = hardware)");
}

ExperimentConfig base_config(const CommonOptions& o) {
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{}
                                             : config_from_json(read_file(o.config_path));
  if (!o.task.empty()) c.task = parse_task(o.task);
  if (!o.seeds.empty()) c.seeds = parse_seeds(o.seeds);
  if (o.steps >= 0) c.steps = o.steps;
  if (o.candidates >= 0) c.planner.num_candidates = o.candidates;
  if (o.budget >= 0.0) c.planner.budget = o.budget;
  validate(c);
  return c;
}

int workers(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

int finish(const BatchResult& batch, const std::filesystem::path& out) {
  const auto files = export_results(batch, out);
  if (!batch.ok()) {
    std::cout << failure_report_json(batch) << '\n';
    return 1;
  }
  std::cerr << "wrote " << files.size() << " files to " << out.string() << '\n';
  return 0;
}

int cmd_run(const CommonOptions& o) {
  ExperimentConfig c = base_config(o);
  if (!o.methods.empty()) c.method = parse_method(o.methods.front());
  const std::filesystem::path out = o.out;
  std::filesystem::create_directories(out);
  write_file(out / "config.json", config_to_json(c));

  BatchResult batch;
  batch.configs = {c};
  for (std::uint64_t seed : c.seed_list()) {
    try {
      std::vector<PlanTrace> traces;
      RunLog log = run_mission(c, seed, &traces);
      const std::string stem = std::string(to_string(c.task)) + "_" +
                               std::string(to_string(c.method)) + "_" + std::to_string(seed);
      write_file(out / ("runlog_" + stem + ".json"), runlog_to_json(log));
      write_file(out / ("trace_" + stem + ".csv"), plan_trace_csv(traces));
      write_file(out / ("world_" + std::to_string(seed) + ".json"),
                 world_to_json(setup_mission(c, seed).world));
      batch.runs.push_back({c.task, c.method, seed, std::move(log)});
    } catch (const std::exception& e) {
      batch.failures.push_back({c.task, c.method, seed, e.what()});
      batch.runs.push_back({c.task, c.method, seed, std::nullopt});
    }
  }
  aggregate(batch);
  return finish(batch, out);
}

int cmd_batch(const CommonOptions& o) {
  const ExperimentConfig c = base_config(o);
  std::vector<ExperimentConfig> configs;
  if (o.methods.empty()) {
    for (Method m : kAllMethods) {
      configs.push_back(c);
      configs.back().method = m;
    }
  } else {
    for (const auto& name : o.methods) {
      configs.push_back(c);
      configs.back().method = parse_method(name);
    }
  }
  const BatchResult batch = run_batch(configs, workers(o.parallelism));
  std::filesystem::create_directories(o.out);
  write_file(std::filesystem::path(o.out) / "config.json", config_to_json(c));
  return finish(batch, o.out);
}

int cmd_characterize(const CommonOptions& o, int samples) {
  const ExperimentConfig c = base_config(o);
  const SensorConfig& s = c.sensor;
  const std::filesystem::path out = o.out;
  std::filesystem::create_directories(out);

  Target target;
  target.true_class = 0;
  std::ostringstream conf;
  conf.precision(10);
  conf << "distance,nominal,mean_gamma1,mean_gamma3,mean_gamma6\n";
  for (int k = 0; k <= 140; ++k) {
    const double d = 0.1 * k;
    target.position = Vec2(d, 0.0);
    conf << d << ',' << nominal_confidence(d, s);
    for (double gamma : {1.0, 3.0, 6.0}) {
      NoiseContext ctx;
      ctx.distance = d;
      ctx.gamma = gamma;
      Rng rng = make_stream(0, "characterize", {std::uint64_t(k), std::uint64_t(gamma)});
      double sum = 0.0;
      int hits = 0;
      for (int i = 0; i < samples; ++i) {
        const SemanticMeasurement m = sample_semantic(Pose(0, 0, 0), target, ctx, s, rng);
        if (m.is_miss()) continue;
        sum += (*m.confidences)(0);
        ++hits;
      }
      conf << ',' << (hits ? sum / hits : std::nan(""));
    }
    conf << '\n';
  }
  write_file(out / "confidence_vs_distance.csv", conf.str());

  std::ostringstream noise;
  noise.precision(10);
  noise << "gamma,sigma_range,sigma_bearing,p_miss,p_outlier\n";
  for (int k = 0; k <= 50; ++k) {
    const double g = 1.0 + 0.1 * k;
    noise << g << ',' << g * s.sigma_range << ',' << g * s.sigma_bearing << ','
          << miss_probability(g, s) << ',' << outlier_probability(g, s) << '\n';
  }
  write_file(out / "noise_vs_gamma.csv", noise.str());

  std::ostringstream occl;
  occl.precision(10);
  occl << "lateral_offset,depth,gamma\n";
  Target t;
  t.position = Vec2(4.0, 0.0);
  for (int k = -20; k <= 20; ++k) {
    const Occluder occ{0, Vec2(2.0, 0.05 * k), c.world.occluder_radius};
    const double depth = occlusion_depth(Vec2(0, 0), t, occ);
    occl << 0.05 * k << ',' << depth << ',' << noise_gamma(depth, false, s) << '\n';
  }
  write_file(out / "occlusion_sweep.csv", occl.str());
  std::cerr << "wrote sensor characterization to " << out.string() << '\n';
  return 0;
}

int cmd_rasterize(const CommonOptions& o, const std::string& scenario, std::size_t target,
                  double resolution) {
  ExperimentConfig c = base_config(o);
  const Method method = o.methods.empty() ? Method::Complete : parse_method(o.methods.front());
  const std::uint64_t seed = c.seed_list().front();
  MissionSetup setup = setup_mission(c, seed);
  if (!scenario.empty()) setup.world = world_from_json(read_file(scenario));
  if (target >= setup.world.targets.size()) throw InvalidArgument("target index out of range");
  const std::vector<Pose> history{setup.start};
  const PerceptualMap map = build_map(setup.world, target, setup.world.targets[target].position,
                                      history.size(), map_options_for(method, c.factors));
  const Grid grid = rasterize_map(map, setup.world, history, resolution);
  const std::filesystem::path out = o.out;
  std::filesystem::create_directories(out);
  const std::string stem = "raster_target" + std::to_string(target);
  write_file(out / (stem + ".csv"), grid_to_csv(grid));
  write_file(out / (stem + ".pgm"), grid_to_pgm(grid));
  write_file(out / "world.json", world_to_json(setup.world));
  std::cerr << "wrote " << grid.rows << "x" << grid.cols << " raster to " << out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active perception simulator with perceptual factors"};
  app.require_subcommand(1);

  CommonOptions run_o, batch_o, char_o, raster_o;
  auto* run = app.add_subcommand("run", "run missions for one method");
  add_common(run, run_o, false);
  auto* batch = app.add_subcommand("batch", "run the method x seed matrix and export results");
  add_common(batch, batch_o, true);
  auto* characterize = app.add_subcommand("characterize", "dump sensor model curves as CSV");
  add_common(characterize, char_o, false);
  int samples = 2000;
  characterize->add_option("--samples", samples, "Monte-Carlo draws per curve point");
  auto* rasterize = app.add_subcommand("rasterize", "rasterize a target's perceptual map");
  add_common(rasterize, raster_o, false);
  std::string scenario;
  std::size_t target = 0;
  double resolution = 0.1;
  rasterize->add_option("--scenario", scenario, "world JSON file (default: generated from seed)");
  rasterize->add_option("--target", target, "target index");
  rasterize->add_option("--resolution", resolution, "cell size [m]");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_o);
    if (*batch) return cmd_batch(batch_o);
    if (*characterize) return cmd_characterize(char_o, samples);
    if (*rasterize) return cmd_rasterize(raster_o, scenario, target, resolution);
  } catch (const std::exception& e) {
    nlohmann::json report{{"ok", false}, {"error", e.what()}};
    std::cout << report.dump(2) << '\n';
    return 1;
  }
  return 0;
}
