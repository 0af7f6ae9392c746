#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "percept/factors.hpp"
#include "percept/world.hpp"

namespace percept {

struct OcclusionRef {
  std::size_t occluder;
  friend bool operator==(const OcclusionRef&, const OcclusionRef&) = default;
};
struct BackLightRef {
  std::size_t light;
  friend bool operator==(const BackLightRef&, const BackLightRef&) = default;
};
struct RedundancyRef {
  std::size_t past_pose;  // index into the pose history
  friend bool operator==(const RedundancyRef&, const RedundancyRef&) = default;
};

using FactorKind = std::variant<OcclusionRef, BackLightRef, RedundancyRef>;

struct Factor {
  FactorKind kind;
  FactorParams params;
};

/// Perceptual map of one target: the product of its factors evaluated at a
/// viewpoint. `anchor` is the target position the factor geometry is built
/// around (the current estimate, or the known position).
struct PerceptualMap {
  std::size_t target{0};
  Vec2 anchor{Vec2::Zero()};
  std::vector<Factor> factors;
};

/// Product of all factors at `pose`. An empty map evaluates to 1.
/// Throws InvalidArgument on a reference that is not resolvable.
double evaluate_map(const PerceptualMap& map, const Pose& pose, const World& world,
                    std::span<const Pose> history);

/// Which factor kinds a map contains and how they are parameterised.
struct MapOptions {
  bool occlusion{true};
  bool light{true};
  bool redundancy{true};
  FactorParams occlusion_params{3.0, 0.5, 1.0};
  /// Occlusion parabola width; unset means occluder radius + target radius.
  std::optional<double> occlusion_width;
  /// Back-light delta. The width is taken from each light's diffusion width.
  FactorParams light_params{2.0, 3.0, 1.0};
  /// Only add a back-light factor when the light's emission cone contains the
  /// anchor. Off by default: a mislocated anchor then drops a real factor.
  bool light_cone_gate{false};
  FactorParams redundancy_params{3.0, 1.0, 0.1};
  /// Number of most recent poses that get a redundancy factor; 0 keeps all.
  std::size_t history_window{0};
  /// Weight on heading difference in the redundancy distance; 0 = position only.
  double redundancy_heading_weight{0.0};
};

/// True when `point` lies inside the emission cone of `light`.
bool illuminates(const LightSource& light, const Vec2& point);

/// Builds the map for `target` around `anchor`: one occlusion factor per
/// occluder, one back-light factor per light (optionally only those whose
/// cone reaches the anchor), one redundancy factor per pose in the history.
PerceptualMap build_map(const World& world, std::size_t target, const Vec2& anchor,
                        std::size_t history_size, const MapOptions& options);

/// Dense raster of a map. Cell (row, col) has centre
/// (origin.x + (col + 0.5) * resolution, origin.y + (row + 0.5) * resolution);
/// row 0 is the minimum-y edge. Values are stored row-major.
struct Grid {
  Vec2 origin{Vec2::Zero()};
  double resolution{1.0};
  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<double> values;

  double at(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
  Vec2 cell_center(std::size_t row, std::size_t col) const {
    return origin + Vec2((col + 0.5) * resolution, (row + 0.5) * resolution);
  }
};

inline constexpr std::size_t kMaxRasterCells = 10'000'000;

/// Evaluates the map at every cell centre of the world bounds (heading 0).
Grid rasterize_map(const PerceptualMap& map, const World& world, std::span<const Pose> history,
                   double resolution);

/// Long-format CSV: header `x,y,cost`, one line per cell in row-major order.
std::string grid_to_csv(const Grid& grid);

/// Binary PGM (P5) image; top image row is the maximum-y edge, cost 1 maps to
/// black and the grid maximum to white.
std::string grid_to_pgm(const Grid& grid);

}  // namespace percept
