#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "percept/geometry.hpp"

namespace percept {

struct Target {
  int id{0};
  Vec2 position{Vec2::Zero()};
  double radius{0.25};
  int true_class{0};

  friend bool operator==(const Target&, const Target&) = default;
};

struct Occluder {
  int id{0};
  Vec2 position{Vec2::Zero()};
  double radius{0.25};

  friend bool operator==(const Occluder&, const Occluder&) = default;
};

/// Directional light. `direction` is the propagation direction of the light;
/// points within `cone_half_angle` of it (seen from `position`) are lit.
struct LightSource {
  int id{0};
  Vec2 position{Vec2::Zero()};
  double direction{0.0};
  double diffusion_width{3.0};
  double cone_half_angle{1.0471975511965976};

  friend bool operator==(const LightSource&, const LightSource&) = default;
};

struct Bounds {
  Vec2 min{Vec2::Zero()};
  Vec2 max{Vec2(10.0, 10.0)};

  bool contains(const Vec2& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
  Vec2 clamp(const Vec2& p) const { return p.cwiseMax(min).cwiseMin(max); }
  double width() const { return max.x() - min.x(); }
  double height() const { return max.y() - min.y(); }

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Ground-truth scene. Immutable after generation.
struct World {
  Bounds bounds;
  std::vector<Target> targets;
  std::vector<Occluder> occluders;
  std::vector<LightSource> lights;

  friend bool operator==(const World&, const World&) = default;
};

/// Parameters of the random scenario generator.
struct WorldSpec {
  Bounds bounds;
  int num_targets{10};
  int num_occluders{10};
  int num_lights{2};
  int num_classes{4};
  double target_radius{0.25};
  double occluder_radius{0.25};
  double light_diffusion_width{3.0};
  double light_cone_half_angle{1.0471975511965976};
  double min_separation{0.5};
  int max_attempts{10000};
};

/// Places all entities uniformly inside the bounds with pairwise separation.
/// Throws PlacementFailure naming the entity class that could not be placed.
World generate_world(std::uint64_t seed, const WorldSpec& spec);

std::string world_to_json(const World& world);
World world_from_json(const std::string& text);

}  // namespace percept
