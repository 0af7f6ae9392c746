#include "percept/perceptual_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace percept {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void dangling(const char* what, std::size_t index) {
  throw InvalidArgument(std::string("perceptual map: dangling ") + what + " reference " +
                        std::to_string(index));
}

}  // namespace

double evaluate_map(const PerceptualMap& map, const Pose& pose, const World& world,
                    std::span<const Pose> history) {
  double cost = 1.0;
  for (const Factor& f : map.factors) {
    cost *= std::visit(
        Overloaded{
            [&](const OcclusionRef& r) {
              if (r.occluder >= world.occluders.size()) dangling("occluder", r.occluder);
              return occlusion_factor(pose, world.occluders[r.occluder], map.anchor, f.params);
            },
            [&](const BackLightRef& r) {
              if (r.light >= world.lights.size()) dangling("light", r.light);
              return light_factor(pose, world.lights[r.light], map.anchor, f.params);
            },
            [&](const RedundancyRef& r) {
              if (r.past_pose >= history.size()) dangling("past pose", r.past_pose);
              return redundancy_factor(pose, history[r.past_pose], f.params);
            },
        },
        f.kind);
  }
  return cost;
}

bool illuminates(const LightSource& light, const Vec2& point) {
  const Vec2 d = point - light.position;
  if (d.squaredNorm() == 0.0) return true;
  const double off_axis = wrap_angle(std::atan2(d.y(), d.x()) - light.direction);
  return std::abs(off_axis) <= light.cone_half_angle;
}

PerceptualMap build_map(const World& world, std::size_t target, const Vec2& anchor,
                        std::size_t history_size, const MapOptions& options) {
  if (target >= world.targets.size()) dangling("target", target);
  PerceptualMap map;
  map.target = target;
  map.anchor = anchor;

  if (options.occlusion) {
    for (std::size_t i = 0; i < world.occluders.size(); ++i) {
      const Occluder& o = world.occluders[i];
      // An occluder sitting on the anchor has no defined shadow axis.
      if ((o.position - anchor).squaredNorm() == 0.0) continue;
      FactorParams p = options.occlusion_params;
      p.width = options.occlusion_width.value_or(o.radius + world.targets[target].radius);
      validate(p);
      map.factors.push_back({OcclusionRef{i}, p});
    }
  }
  if (options.light) {
    for (std::size_t i = 0; i < world.lights.size(); ++i) {
      const LightSource& l = world.lights[i];
      if (options.light_cone_gate && !illuminates(l, anchor)) continue;
      FactorParams p = options.light_params;
      p.width = l.diffusion_width;
      validate(p);
      map.factors.push_back({BackLightRef{i}, p});
    }
  }
  if (options.redundancy) {
    validate(options.redundancy_params);
    std::size_t first = 0;
    if (options.history_window > 0 && history_size > options.history_window)
      first = history_size - options.history_window;
    for (std::size_t i = first; i < history_size; ++i)
      map.factors.push_back({RedundancyRef{i}, options.redundancy_params});
  }
  return map;
}

Grid rasterize_map(const PerceptualMap& map, const World& world, std::span<const Pose> history,
                   double resolution) {
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw InvalidArgument("rasterize: resolution must be > 0");
  const double cols_f = std::ceil(world.bounds.width() / resolution - 1e-9);
  const double rows_f = std::ceil(world.bounds.height() / resolution - 1e-9);
  if (cols_f * rows_f > double(kMaxRasterCells))
    throw InvalidArgument("rasterize: resolution yields more than 1e7 cells");

  Grid grid;
  grid.origin = world.bounds.min;
  grid.resolution = resolution;
  grid.cols = std::max<std::size_t>(1, static_cast<std::size_t>(cols_f));
  grid.rows = std::max<std::size_t>(1, static_cast<std::size_t>(rows_f));
  grid.values.resize(grid.rows * grid.cols);
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      const Vec2 center = grid.cell_center(r, c);
      grid.values[r * grid.cols + c] =
          evaluate_map(map, Pose(center.x(), center.y(), 0.0), world, history);
    }
  }
  return grid;
}

std::string grid_to_csv(const Grid& grid) {
  std::ostringstream os;
  os.precision(17);
  os << "x,y,cost\n";
  for (std::size_t r = 0; r < grid.rows; ++r)
    for (std::size_t c = 0; c < grid.cols; ++c) {
      const Vec2 p = grid.cell_center(r, c);
      os << p.x() << ',' << p.y() << ',' << grid.at(r, c) << '\n';
    }
  return os.str();
}

std::string grid_to_pgm(const Grid& grid) {
  const double hi = grid.values.empty()
                        ? 1.0
                        : *std::max_element(grid.values.begin(), grid.values.end());
  const double span = hi > 1.0 ? hi - 1.0 : 1.0;
  std::string out = "P5\n" + std::to_string(grid.cols) + " " + std::to_string(grid.rows) + "\n255\n";
  for (std::size_t r = grid.rows; r-- > 0;)
    for (std::size_t c = 0; c < grid.cols; ++c) {
      const double v = std::clamp((grid.at(r, c) - 1.0) / span, 0.0, 1.0);
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
  return out;
}

}  // namespace percept
