#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "percept/experiment.hpp"

namespace percept {

namespace {

std::ostringstream csv_stream() {
  std::ostringstream os;
  os.precision(12);
  return os;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::filesystem::path>& written) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("export: cannot write " + path.string());
  f << content;
  if (!f) throw Error("export: failed writing " + path.string());
  written.push_back(path);
}

const ExperimentConfig* config_for(const BatchResult& batch, Task task, Method method) {
  for (const auto& c : batch.configs)
    if (c.task == task && c.method == method) return &c;
  return nullptr;
}

}  // namespace

std::string metrics_csv(const BatchResult& batch) {
  auto os = csv_stream();
  os << "task,method,seed,step,nees,rmse,confidence,accuracy,hits_occlusion,hits_light,"
        "hits_redundancy\n";
  for (const RunOutcome& r : batch.runs) {
    if (!r.log) continue;
    for (const StepRecord& s : r.log->steps) {
      const StepMetrics& m = s.metrics;
      os << to_string(r.task) << ',' << to_string(r.method) << ',' << r.seed << ',' << s.step
         << ',' << m.nees_avg << ',' << m.rmse << ',' << m.confidence_avg << ',' << m.accuracy
         << ',' << m.hits.occlusion << ',' << m.hits.light << ',' << m.hits.redundancy << '\n';
    }
  }
  return os.str();
}

std::string aggregate_csv(const BatchResult& batch) {
  auto os = csv_stream();
  os << "task,method,step,runs,nees_mean,nees_std,rmse_mean,rmse_std,confidence_mean,"
        "confidence_std,accuracy_mean,accuracy_std\n";
  for (const StepAggregate& a : batch.steps) {
    os << to_string(a.task) << ',' << to_string(a.method) << ',' << a.step << ',' << a.runs << ','
       << a.nees.mean << ',' << a.nees.std << ',' << a.rmse.mean << ',' << a.rmse.std << ','
       << a.confidence.mean << ',' << a.confidence.std << ',' << a.accuracy.mean << ','
       << a.accuracy.std << '\n';
  }
  return os.str();
}

std::string hits_csv(const BatchResult& batch) {
  auto os = csv_stream();
  os << "task,method,occlusion,light,redundancy,total\n";
  for (const HitAggregate& h : batch.hits)
    os << to_string(h.task) << ',' << to_string(h.method) << ',' << h.hits.occlusion << ','
       << h.hits.light << ',' << h.hits.redundancy << ',' << h.hits.total() << '\n';
  return os.str();
}

std::string summary_json(const BatchResult& batch) {
  using nlohmann::json;
  json j;
  j["schema"] = "percept.summary/1";
  j["methods"] = json::array();
  for (const HitAggregate& h : batch.hits) {
    json m{{"task", to_string(h.task)},
           {"method", to_string(h.method)},
           {"hits",
            {{"occlusion", h.hits.occlusion},
             {"light", h.hits.light},
             {"redundancy", h.hits.redundancy},
             {"total", h.hits.total()}}}};
    const StepAggregate* last = nullptr;
    for (const StepAggregate& a : batch.steps)
      if (a.task == h.task && a.method == h.method) last = &a;
    if (last) {
      auto ms = [](const MetricSummary& s) { return json{{"mean", s.mean}, {"std", s.std}}; };
      json fin{{"step", last->step}, {"runs", last->runs}};
      if (h.task == Task::Metric) {
        fin["nees"] = ms(last->nees);
        fin["rmse"] = ms(last->rmse);
      } else {
        fin["confidence"] = ms(last->confidence);
        fin["accuracy"] = ms(last->accuracy);
      }
      m["final"] = fin;
    }
    j["methods"].push_back(m);
  }
  j["failures"] = json::parse(failure_report_json(batch)).at("failures");
  return j.dump(2);
}

std::string failure_report_json(const BatchResult& batch) {
  using nlohmann::json;
  json j;
  j["ok"] = batch.ok();
  j["failures"] = json::array();
  for (const RunFailure& f : batch.failures)
    j["failures"].push_back({{"task", to_string(f.task)},
                             {"method", to_string(f.method)},
                             {"seed", f.seed},
                             {"error", f.message}});
  return j.dump(2);
}

std::string line_chart_svg(std::string_view title, std::string_view y_label,
                           const std::vector<Series>& series, const std::vector<double>& hlines) {
  constexpr double width = 640, height = 400, left = 60, right = 150, top = 40, bottom = 50;
  static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                            "#9467bd", "#8c564b", "#e377c2"};
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Series& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  for (double h : hlines) {
    y0 = std::min(y0, h);
    y1 = std::max(y1, h);
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1;
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  y0 = std::min(y0, 0.0);
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os.precision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\">"
     << xml_escape(title) << "</text>\n"
     << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
     << top + ph << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double yv = y0 + (y1 - y0) * t / 4.0;
    const double xv = x0 + (x1 - x0) * t / 4.0;
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << yv
       << "</text>\n"
       << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << xv
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">step</text>\n"
     << "<text x=\"14\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 14 " << top + ph / 2
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
     << xml_escape(y_label) << "</text>\n";
  for (double h : hlines)
    os << "<line x1=\"" << left << "\" y1=\"" << py(h) << "\" x2=\"" << left + pw << "\" y2=\""
       << py(h) << "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = palette[k % std::size(palette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
        os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    os << "\"/>\n";
    const double ly = top + 14 + 18 * double(k);
    os << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << left + pw + 36 << "\" y=\"" << ly + 4
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string plan_trace_csv(const std::vector<PlanTrace>& traces) {
  auto os = csv_stream();
  os << "step,candidate,chosen,x,y,heading,utility,psi\n";
  for (const PlanTrace& t : traces)
    for (std::size_t i = 0; i < t.scores.size(); ++i) {
      const CandidateScore& s = t.scores[i];
      os << t.step << ',' << i << ',' << (i == t.chosen ? 1 : 0) << ',' << s.pose.x << ','
         << s.pose.y << ',' << s.pose.heading << ',' << s.utility << ',';
      for (std::size_t k = 0; k < s.psi.size(); ++k) os << (k ? ";" : "") << s.psi[k];
      os << '\n';
    }
  return os.str();
}

std::vector<std::filesystem::path> export_results(const BatchResult& batch,
                                                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("export: cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  write_file(out_dir / "metrics.csv", metrics_csv(batch), written);
  write_file(out_dir / "aggregate.csv", aggregate_csv(batch), written);
  write_file(out_dir / "factor_hits.csv", hits_csv(batch), written);
  write_file(out_dir / "summary.json", summary_json(batch), written);

  struct Chart {
    Task task;
    const char* file;
    const char* label;
    MetricSummary StepAggregate::*field;
  };
  const Chart charts[] = {{Task::Metric, "nees.svg", "average NEES", &StepAggregate::nees},
                          {Task::Metric, "rmse.svg", "RMSE [m]", &StepAggregate::rmse},
                          {Task::Semantic, "confidence.svg", "true-class confidence",
                           &StepAggregate::confidence},
                          {Task::Semantic, "accuracy.svg", "accuracy", &StepAggregate::accuracy}};
  for (const Chart& chart : charts) {
    std::vector<Series> series;
    int pooled = 0;
    for (const HitAggregate& h : batch.hits) {
      if (h.task != chart.task) continue;
      Series s{std::string(to_string(h.method)), {}, {}};
      for (const StepAggregate& a : batch.steps) {
        if (a.task != h.task || a.method != h.method) continue;
        s.x.push_back(a.step);
        s.y.push_back((a.*chart.field).mean);
        pooled = std::max(pooled, a.runs);
      }
      series.push_back(std::move(s));
    }
    if (series.empty()) continue;
    std::vector<double> hlines;
    if (chart.field == &StepAggregate::nees && pooled > 0) {
      const ExperimentConfig* c = config_for(batch, Task::Metric, batch.hits.front().method);
      const int targets = c ? std::max(1, c->world.num_targets) : 1;
      const Band band = chi2_band(2, pooled * targets);
      hlines = {band.lo, band.hi};
    }
    write_file(out_dir / chart.file, line_chart_svg(chart.label, chart.label, series, hlines),
               written);
  }

  // Perceptual map of the first target of the first successful run, with
  // every factor kind enabled, as seen from the start pose.
  for (const RunOutcome& r : batch.runs) {
    if (!r.log) continue;
    const ExperimentConfig* c = config_for(batch, r.task, r.method);
    if (!c) break;
    const MissionSetup setup = setup_mission(*c, r.seed);
    if (setup.world.targets.empty()) break;
    const MapOptions options = map_options_for(Method::Complete, c->factors);
    const std::vector<Pose> history{setup.start};
    const PerceptualMap map =
        build_map(setup.world, 0, setup.world.targets[0].position, history.size(), options);
    const Grid grid = rasterize_map(map, setup.world, history, 0.1);
    write_file(out_dir / "raster_target0.csv", grid_to_csv(grid), written);
    write_file(out_dir / "raster_target0.pgm", grid_to_pgm(grid), written);
    write_file(out_dir / "raster_world.json", world_to_json(setup.world), written);
    break;
  }
  return written;
}

}  // namespace percept
