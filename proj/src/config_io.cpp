#include <json.hpp>

#include "percept/experiment.hpp"

namespace percept {

namespace {

using nlohmann::json;

json params(const FactorParams& p) {
  return {{"delta", p.delta}, {"width", p.width}, {"sigma", p.sigma}};
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_params(const json& j, const char* key, FactorParams& p) {
  if (!j.contains(key)) return;
  const json& jp = j.at(key);
  read(jp, "delta", p.delta);
  read(jp, "width", p.width);
  read(jp, "sigma", p.sigma);
}

std::string_view to_string(CandidateStrategy s) {
  return s == CandidateStrategy::RandomBall ? "random-ball" : "fixed-ring";
}
std::string_view to_string(SemanticUtility s) {
  return s == SemanticUtility::ExpectedClass ? "expected-class" : "self-fusion";
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["version"] = ExperimentConfig::kSchemaVersion;
  j["task"] = to_string(c.task);
  j["method"] = to_string(c.method);
  j["seeds"] = c.seeds;
  j["num_envs"] = c.num_envs;
  j["steps"] = c.steps;
  j["prior_sigma"] = c.prior_sigma;
  j["measure_all_targets"] = c.measure_all_targets;
  j["fuse_miss_as_no_object"] = c.fuse_miss_as_no_object;
  j["no_object_confidence"] = c.no_object_confidence;
  j["no_object_class"] = c.no_object_class;

  const WorldSpec& w = c.world;
  j["world"] = {{"bounds_min", {w.bounds.min.x(), w.bounds.min.y()}},
                {"bounds_max", {w.bounds.max.x(), w.bounds.max.y()}},
                {"num_targets", w.num_targets},
                {"num_occluders", w.num_occluders},
                {"num_lights", w.num_lights},
                {"num_classes", w.num_classes},
                {"target_radius", w.target_radius},
                {"occluder_radius", w.occluder_radius},
                {"light_diffusion_width", w.light_diffusion_width},
                {"light_cone_half_angle", w.light_cone_half_angle},
                {"min_separation", w.min_separation},
                {"max_attempts", w.max_attempts}};

  const MapOptions& f = c.factors;
  j["factors"] = {{"occlusion", params(f.occlusion_params)},
                  {"occlusion_width", f.occlusion_width ? json(*f.occlusion_width) : json(nullptr)},
                  {"light", params(f.light_params)},
                  {"light_cone_gate", f.light_cone_gate},
                  {"redundancy", params(f.redundancy_params)},
                  {"history_window", f.history_window},
                  {"redundancy_heading_weight", f.redundancy_heading_weight}};

  const SensorConfig& s = c.sensor;
  j["sensor"] = {{"sigma_range", s.sigma_range},
                 {"sigma_bearing", s.sigma_bearing},
                 {"min_range", s.min_range},
                 {"gamma_per_depth", s.gamma_per_depth},
                 {"gamma_backlit", s.gamma_backlit},
                 {"gamma_max", s.gamma_max},
                 {"backlit_half_angle", s.backlit_half_angle},
                 {"miss_per_gamma", s.miss_per_gamma},
                 {"miss_max", s.miss_max},
                 {"confidence_max", s.confidence_max},
                 {"confidence_min", s.confidence_min},
                 {"confidence_slope", s.confidence_slope},
                 {"confidence_noise", s.confidence_noise},
                 {"outlier_per_gamma", s.outlier_per_gamma},
                 {"outlier_max", s.outlier_max},
                 {"misclass_distance", s.misclass_distance},
                 {"misclass_mass", s.misclass_mass},
                 {"confidence_floor", s.confidence_floor}};

  const PlannerConfig& p = c.planner;
  j["planner"] = {{"horizon", p.horizon},
                  {"num_candidates", p.num_candidates},
                  {"budget", p.budget},
                  {"strategy", to_string(p.strategy)},
                  {"semantic_utility", to_string(p.semantic_utility)}};
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(text);
    const int version = j.value("version", ExperimentConfig::kSchemaVersion);
    if (version != ExperimentConfig::kSchemaVersion)
      throw InvalidArgument("config: unsupported schema version " + std::to_string(version));
    if (j.contains("task")) c.task = parse_task(j.at("task").get<std::string>());
    if (j.contains("method")) c.method = parse_method(j.at("method").get<std::string>());
    read(j, "seeds", c.seeds);
    read(j, "num_envs", c.num_envs);
    read(j, "steps", c.steps);
    read(j, "prior_sigma", c.prior_sigma);
    read(j, "measure_all_targets", c.measure_all_targets);
    read(j, "fuse_miss_as_no_object", c.fuse_miss_as_no_object);
    read(j, "no_object_confidence", c.no_object_confidence);
    read(j, "no_object_class", c.no_object_class);

    if (j.contains("world")) {
      const json& w = j.at("world");
      WorldSpec& s = c.world;
      if (w.contains("bounds_min"))
        s.bounds.min = {w["bounds_min"].at(0).get<double>(), w["bounds_min"].at(1).get<double>()};
      if (w.contains("bounds_max"))
        s.bounds.max = {w["bounds_max"].at(0).get<double>(), w["bounds_max"].at(1).get<double>()};
      read(w, "num_targets", s.num_targets);
      read(w, "num_occluders", s.num_occluders);
      read(w, "num_lights", s.num_lights);
      read(w, "num_classes", s.num_classes);
      read(w, "target_radius", s.target_radius);
      read(w, "occluder_radius", s.occluder_radius);
      read(w, "light_diffusion_width", s.light_diffusion_width);
      read(w, "light_cone_half_angle", s.light_cone_half_angle);
      read(w, "min_separation", s.min_separation);
      read(w, "max_attempts", s.max_attempts);
    }
    c.sensor.num_classes = c.world.num_classes;

    if (j.contains("factors")) {
      const json& f = j.at("factors");
      read_params(f, "occlusion", c.factors.occlusion_params);
      read_params(f, "light", c.factors.light_params);
      read(f, "light_cone_gate", c.factors.light_cone_gate);
      read_params(f, "redundancy", c.factors.redundancy_params);
      if (f.contains("occlusion_width")) {
        if (f["occlusion_width"].is_null())
          c.factors.occlusion_width.reset();
        else
          c.factors.occlusion_width = f["occlusion_width"].get<double>();
      }
      read(f, "history_window", c.factors.history_window);
      read(f, "redundancy_heading_weight", c.factors.redundancy_heading_weight);
    }

    if (j.contains("sensor")) {
      const json& s = j.at("sensor");
      SensorConfig& o = c.sensor;
      read(s, "sigma_range", o.sigma_range);
      read(s, "sigma_bearing", o.sigma_bearing);
      read(s, "min_range", o.min_range);
      read(s, "gamma_per_depth", o.gamma_per_depth);
      read(s, "gamma_backlit", o.gamma_backlit);
      read(s, "gamma_max", o.gamma_max);
      read(s, "backlit_half_angle", o.backlit_half_angle);
      read(s, "miss_per_gamma", o.miss_per_gamma);
      read(s, "miss_max", o.miss_max);
      read(s, "confidence_max", o.confidence_max);
      read(s, "confidence_min", o.confidence_min);
      read(s, "confidence_slope", o.confidence_slope);
      read(s, "confidence_noise", o.confidence_noise);
      read(s, "outlier_per_gamma", o.outlier_per_gamma);
      read(s, "outlier_max", o.outlier_max);
      read(s, "misclass_distance", o.misclass_distance);
      read(s, "misclass_mass", o.misclass_mass);
      read(s, "confidence_floor", o.confidence_floor);
    }

    if (j.contains("planner")) {
      const json& p = j.at("planner");
      read(p, "horizon", c.planner.horizon);
      read(p, "num_candidates", c.planner.num_candidates);
      read(p, "budget", c.planner.budget);
      if (p.contains("strategy")) {
        const auto s = p["strategy"].get<std::string>();
        if (s == "random-ball") c.planner.strategy = CandidateStrategy::RandomBall;
        else if (s == "fixed-ring") c.planner.strategy = CandidateStrategy::FixedRing;
        else throw InvalidArgument("config: unknown candidate strategy '" + s + "'");
      }
      if (p.contains("semantic_utility")) {
        const auto s = p["semantic_utility"].get<std::string>();
        if (s == "expected-class") c.planner.semantic_utility = SemanticUtility::ExpectedClass;
        else if (s == "self-fusion") c.planner.semantic_utility = SemanticUtility::SelfFusion;
        else throw InvalidArgument("config: unknown semantic utility '" + s + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

}  // namespace percept
