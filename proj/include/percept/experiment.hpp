#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "percept/estimators.hpp"
#include "percept/metrics.hpp"
#include "percept/perceptual_map.hpp"
#include "percept/planner.hpp"
#include "percept/sensor.hpp"
#include "percept/world.hpp"

namespace percept {

/// Which factor kinds the planner and the fusion see. The simulated sensor
/// always applies every ground-truth effect.
enum class Method { Basic, Occlusions, Light, PreviousPoses, Complete };

inline constexpr Method kAllMethods[] = {Method::Basic, Method::Occlusions, Method::Light,
                                         Method::PreviousPoses, Method::Complete};

std::string_view to_string(Method m);
std::string_view to_string(Task t);
Method parse_method(std::string_view s);
Task parse_task(std::string_view s);

/// Factor kinds enabled for `method`, keeping the parameters of `base`.
MapOptions map_options_for(Method method, MapOptions base);

struct ExperimentConfig {
  static constexpr int kSchemaVersion = 1;

  Task task{Task::Metric};
  Method method{Method::Complete};
  std::vector<std::uint64_t> seeds;  // empty = 0 .. num_envs-1
  int num_envs{50};
  int steps{50};
  WorldSpec world;
  MapOptions factors;
  SensorConfig sensor;
  PlannerConfig planner;
  /// Standard deviation of the initial position belief, meters.
  double prior_sigma{0.5};
  /// Measure every target at each step; otherwise one target per step, round robin.
  bool measure_all_targets{true};
  /// Fuse semantic misses as a "no object" observation on `no_object_class`.
  bool fuse_miss_as_no_object{false};
  double no_object_confidence{0.75};
  int no_object_class{0};

  std::vector<std::uint64_t> seed_list() const;
};

void validate(const ExperimentConfig& config);

std::string config_to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults. Throws InvalidArgument on a bad schema.
ExperimentConfig config_from_json(const std::string& text);

struct TargetRecord {
  int target{0};
  bool miss{false};
  std::vector<double> reading;  // range, bearing  or  class confidences
  double psi{1.0};
  GaussianBelief<double> gaussian;
  CategoricalBelief<double> categorical;
  FactorHits hits;
  double gamma{1.0};
};

struct StepRecord {
  int step{0};
  Pose pose;
  std::vector<TargetRecord> targets;
  StepMetrics metrics;
};

struct RunLog {
  Task task{Task::Metric};
  std::uint64_t seed{0};
  Pose start;
  StepMetrics prior;
  std::vector<StepRecord> steps;
};

/// Deterministic serialization; identical runs give identical bytes.
std::string runlog_to_json(const RunLog& log);

/// Per-step state shared by the harness and the CLI tools.
struct MissionSetup {
  World world;
  Pose start;
  std::vector<GaussianBelief<double>> gaussian;
  std::vector<CategoricalBelief<double>> categorical;
};

/// World, start pose and priors for `seed`. Identical for every method.
MissionSetup setup_mission(const ExperimentConfig& config, std::uint64_t seed);

/// Optional per-step sink for planner traces.
struct PlanTrace {
  int step;
  std::size_t chosen;
  std::vector<CandidateScore> scores;
};

/// Full mission: sample candidates, score, move, sense, fuse, log.
RunLog run_mission(const ExperimentConfig& config, std::uint64_t seed,
                   std::vector<PlanTrace>* traces = nullptr);

struct RunFailure {
  Task task;
  Method method;
  std::uint64_t seed;
  std::string message;
};

struct RunOutcome {
  Task task;
  Method method;
  std::uint64_t seed;
  std::optional<RunLog> log;
};

struct MetricSummary {
  double mean{0.0};
  double std{0.0};
};

struct StepAggregate {
  Task task;
  Method method;
  int step;
  int runs;
  MetricSummary nees, rmse, confidence, accuracy;
};

struct HitAggregate {
  Task task;
  Method method;
  HitCounts hits;
};

struct BatchResult {
  std::vector<ExperimentConfig> configs;
  std::vector<RunOutcome> runs;  // config-major, then seed order
  std::vector<RunFailure> failures;
  std::vector<StepAggregate> steps;
  std::vector<HitAggregate> hits;

  bool ok() const { return failures.empty(); }
};

/// Runs every (config, seed) cell on `parallelism` workers. Results do not
/// depend on the degree of parallelism.
BatchResult run_batch(const std::vector<ExperimentConfig>& configs, int parallelism);

/// Per-step mean and population std across seeds, order independent.
void aggregate(BatchResult& batch);

/// Writes metrics.csv, aggregate.csv, factor_hits.csv, summary.json, SVG
/// charts and perceptual-map rasters into `out_dir`.
std::vector<std::filesystem::path> export_results(const BatchResult& batch,
                                                  const std::filesystem::path& out_dir);

std::string metrics_csv(const BatchResult& batch);
std::string aggregate_csv(const BatchResult& batch);
std::string hits_csv(const BatchResult& batch);
std::string summary_json(const BatchResult& batch);
std::string failure_report_json(const BatchResult& batch);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone SVG line chart. `hlines` draws dashed horizontal reference lines.
std::string line_chart_svg(std::string_view title, std::string_view y_label,
                           const std::vector<Series>& series,
                           const std::vector<double>& hlines = {});

std::string plan_trace_csv(const std::vector<PlanTrace>& traces);

}  // namespace percept
