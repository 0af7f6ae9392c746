#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "percept/experiment.hpp"

namespace percept {

BatchResult run_batch(const std::vector<ExperimentConfig>& configs, int parallelism) {
  if (configs.empty()) throw InvalidArgument("batch: no configurations");
  for (const auto& c : configs) validate(c);

  BatchResult batch;
  batch.configs = configs;
  struct Cell {
    std::size_t config;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < configs.size(); ++i)
    for (std::uint64_t s : configs[i].seed_list()) cells.push_back({i, s});

  std::vector<std::optional<RunLog>> logs(cells.size());
  std::vector<std::string> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      try {
        logs[k] = run_mission(configs[cells[k].config], cells[k].seed);
      } catch (const std::exception& e) {
        errors[k] = e.what();
        if (errors[k].empty()) errors[k] = "unknown error";
      }
    }
  };
  const int workers = std::clamp(parallelism, 1, static_cast<int>(std::max<std::size_t>(1, cells.size())));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t k = 0; k < cells.size(); ++k) {
    const ExperimentConfig& c = configs[cells[k].config];
    if (!errors[k].empty()) batch.failures.push_back({c.task, c.method, cells[k].seed, errors[k]});
    batch.runs.push_back({c.task, c.method, cells[k].seed, std::move(logs[k])});
  }
  aggregate(batch);
  return batch;
}

namespace {

MetricSummary summarize(std::vector<double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / double(values.size());
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / double(values.size()));
  return s;
}

}  // namespace

void aggregate(BatchResult& batch) {
  batch.steps.clear();
  batch.hits.clear();

  // Groups in order of first appearance; runs sorted by seed inside a group so
  // the reduction order does not depend on how seeds were listed.
  std::vector<std::pair<Task, Method>> keys;
  std::map<std::pair<Task, Method>, std::vector<const RunOutcome*>> groups;
  for (const RunOutcome& r : batch.runs) {
    const auto key = std::make_pair(r.task, r.method);
    if (!groups.contains(key)) keys.push_back(key);
    groups[key];
    if (r.log) groups[key].push_back(&r);
  }

  for (const auto& key : keys) {
    auto runs = groups[key];
    std::stable_sort(runs.begin(), runs.end(),
                     [](const RunOutcome* a, const RunOutcome* b) { return a->seed < b->seed; });
    std::size_t max_steps = 0;
    HitAggregate hits{key.first, key.second, {}};
    for (const RunOutcome* r : runs) {
      max_steps = std::max(max_steps, r->log->steps.size());
      for (const StepRecord& s : r->log->steps) hits.hits += s.metrics.hits;
    }
    batch.hits.push_back(hits);
    for (std::size_t k = 0; k < max_steps; ++k) {
      std::vector<double> nees, rmse, conf, acc;
      for (const RunOutcome* r : runs) {
        if (k >= r->log->steps.size()) continue;
        const StepMetrics& m = r->log->steps[k].metrics;
        nees.push_back(m.nees_avg);
        rmse.push_back(m.rmse);
        conf.push_back(m.confidence_avg);
        acc.push_back(m.accuracy);
      }
      batch.steps.push_back({key.first, key.second, static_cast<int>(k + 1),
                             static_cast<int>(nees.size()), summarize(nees), summarize(rmse),
                             summarize(conf), summarize(acc)});
    }
  }
}

}  // namespace percept
