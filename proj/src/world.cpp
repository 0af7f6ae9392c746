#include "percept/world.hpp"

#include <numbers>
#include <random>

#include <json.hpp>

#include "percept/error.hpp"
#include "percept/rng.hpp"

namespace percept {

namespace {

using nlohmann::json;

class Placer {
 public:
  Placer(const WorldSpec& spec, Rng& rng)
      : spec_(spec),
        rng_(rng),
        xs_(spec.bounds.min.x(), spec.bounds.max.x()),
        ys_(spec.bounds.min.y(), spec.bounds.max.y()) {}

  Vec2 place(const char* entity_class) {
    const double min_d2 = spec_.min_separation * spec_.min_separation;
    for (int attempt = 0; attempt < spec_.max_attempts; ++attempt) {
      const Vec2 p(xs_(rng_), ys_(rng_));
      bool clear = true;
      for (const Vec2& q : placed_) {
        if ((p - q).squaredNorm() < min_d2) {
          clear = false;
          break;
        }
      }
      if (clear) {
        placed_.push_back(p);
        return p;
      }
    }
    throw PlacementFailure(entity_class, std::string("could not place ") + entity_class +
                                             " after " + std::to_string(spec_.max_attempts) +
                                             " attempts");
  }

 private:
  const WorldSpec& spec_;
  Rng& rng_;
  std::uniform_real_distribution<double> xs_;
  std::uniform_real_distribution<double> ys_;
  std::vector<Vec2> placed_;
};

json vec(const Vec2& v) { return json::array({v.x(), v.y()}); }
Vec2 vec(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

World generate_world(std::uint64_t seed, const WorldSpec& spec) {
  if (spec.num_targets < 0 || spec.num_occluders < 0 || spec.num_lights < 0)
    throw InvalidArgument("world spec: entity counts must be >= 0");
  if (!(spec.bounds.width() > 0.0) || !(spec.bounds.height() > 0.0))
    throw InvalidArgument("world spec: bounds must have positive area");
  if (spec.num_classes < 1) throw InvalidArgument("world spec: num_classes must be >= 1");
  if (!(spec.target_radius > 0.0) || !(spec.occluder_radius > 0.0) ||
      !(spec.light_diffusion_width > 0.0))
    throw InvalidArgument("world spec: radii and diffusion width must be > 0");
  if (spec.min_separation < 0.0 || spec.max_attempts < 1)
    throw InvalidArgument("world spec: bad separation or attempt cap");

  Rng rng = make_stream(seed, "world");
  Placer placer(spec, rng);
  std::uniform_int_distribution<int> classes(0, spec.num_classes - 1);
  std::uniform_real_distribution<double> angles(-std::numbers::pi, std::numbers::pi);

  World world;
  world.bounds = spec.bounds;
  for (int i = 0; i < spec.num_targets; ++i) {
    Target t;
    t.id = i;
    t.position = placer.place("target");
    t.radius = spec.target_radius;
    t.true_class = classes(rng);
    world.targets.push_back(t);
  }
  for (int i = 0; i < spec.num_occluders; ++i) {
    world.occluders.push_back({i, placer.place("occluder"), spec.occluder_radius});
  }
  for (int i = 0; i < spec.num_lights; ++i) {
    LightSource l;
    l.id = i;
    l.position = placer.place("light");
    l.direction = wrap_angle(angles(rng));
    l.diffusion_width = spec.light_diffusion_width;
    l.cone_half_angle = spec.light_cone_half_angle;
    world.lights.push_back(l);
  }
  return world;
}

std::string world_to_json(const World& world) {
  json j;
  j["schema"] = "percept.world/1";
  j["bounds"] = {{"min", vec(world.bounds.min)}, {"max", vec(world.bounds.max)}};
  j["targets"] = json::array();
  for (const auto& t : world.targets)
    j["targets"].push_back({{"id", t.id},
                            {"position", vec(t.position)},
                            {"radius", t.radius},
                            {"true_class", t.true_class}});
  j["occluders"] = json::array();
  for (const auto& o : world.occluders)
    j["occluders"].push_back({{"id", o.id}, {"position", vec(o.position)}, {"radius", o.radius}});
  j["lights"] = json::array();
  for (const auto& l : world.lights)
    j["lights"].push_back({{"id", l.id},
                           {"position", vec(l.position)},
                           {"direction", l.direction},
                           {"diffusion_width", l.diffusion_width},
                           {"cone_half_angle", l.cone_half_angle}});
  return j.dump(2);
}

World world_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    World w;
    w.bounds.min = vec(j.at("bounds").at("min"));
    w.bounds.max = vec(j.at("bounds").at("max"));
    for (const auto& t : j.at("targets")) {
      Target target;
      target.id = t.at("id").get<int>();
      target.position = vec(t.at("position"));
      target.radius = t.at("radius").get<double>();
      target.true_class = t.value("true_class", 0);
      if (!(target.radius > 0.0)) throw InvalidArgument("scenario: target radius must be > 0");
      w.targets.push_back(target);
    }
    for (const auto& o : j.at("occluders")) {
      Occluder occ{o.at("id").get<int>(), vec(o.at("position")), o.at("radius").get<double>()};
      if (!(occ.radius > 0.0)) throw InvalidArgument("scenario: occluder radius must be > 0");
      w.occluders.push_back(occ);
    }
    for (const auto& l : j.at("lights")) {
      LightSource light;
      light.id = l.at("id").get<int>();
      light.position = vec(l.at("position"));
      light.direction = l.at("direction").get<double>();
      light.diffusion_width = l.at("diffusion_width").get<double>();
      light.cone_half_angle = l.value("cone_half_angle", light.cone_half_angle);
      if (!(light.diffusion_width > 0.0))
        throw InvalidArgument("scenario: light diffusion_width must be > 0");
      w.lights.push_back(light);
    }
    return w;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("scenario: ") + e.what());
  }
}

}  // namespace percept
