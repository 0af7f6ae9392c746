#pragma once

#include <cmath>

#include "percept/error.hpp"
#include "percept/geometry.hpp"
#include "percept/world.hpp"

namespace percept {

/// Shape parameters of one perceptual factor. `width` drives the parabolic
/// factors (occlusion, back light), `sigma` the redundancy Gaussian.
struct FactorParams {
  double delta{0.0};
  double width{1.0};
  double sigma{1.0};

  friend bool operator==(const FactorParams&, const FactorParams&) = default;
};

inline void validate(const FactorParams& p) {
  if (!(p.delta >= 0.0) || !std::isfinite(p.delta))
    throw InvalidArgument("factor delta must be finite and >= 0");
  if (!(p.width > 0.0) || !(p.sigma > 0.0))
    throw InvalidArgument("factor width and sigma must be > 0");
}

/// Coordinates of `point` in a frame centred at `origin` whose y' axis is the
/// unit vector `axis` and whose x' axis is lateral to it.
template <typename Scalar>
Vector2<Scalar> axis_frame(const Vector2<Scalar>& point, const Vector2<Scalar>& origin,
                           const Vector2<Scalar>& axis) {
  const Vector2<Scalar> d = point - origin;
  return {d.x() * axis.y() - d.y() * axis.x(), d.x() * axis.x() + d.y() * axis.y()};
}

/// Bounded parabolic factor: 1 + delta * exp(-x'^2 / y') inside the region
/// x'^2 / width < y', and exactly 1 outside. At the region boundary the value
/// jumps from 1 + delta * exp(-width) to 1; points on the boundary are outside.
template <typename Scalar>
Scalar parabolic_factor(const Vector2<Scalar>& point, const Vector2<Scalar>& origin,
                        const Vector2<Scalar>& axis, Scalar delta, Scalar width) {
  const Vector2<Scalar> local = axis_frame(point, origin, axis);
  const Scalar xs = local.x() * local.x();
  if (xs / width < local.y()) return Scalar(1) + delta * std::exp(-xs / local.y());
  return Scalar(1);
}

/// Occlusion factor for an occluder at `occluder` hiding a target at `target`.
/// The parabola opens from the occluder along the shadow axis (away from the
/// target), so viewpoints behind the occluder are penalised.
template <typename Scalar>
Scalar occlusion_factor(const Pose2<Scalar>& pose, const Vector2<Scalar>& occluder,
                        const Vector2<Scalar>& target, const FactorParams& params) {
  const Vector2<Scalar> shadow = occluder - target;
  const Scalar norm = shadow.norm();
  if (!(norm > Scalar(0)))
    throw DegenerateGeometry("occlusion factor: occluder coincides with target");
  return parabolic_factor<Scalar>(pose.position(), occluder, shadow / norm,
                                  Scalar(params.delta), Scalar(params.width));
}

inline double occlusion_factor(const Pose& pose, const Occluder& occluder, const Vec2& target,
                               const FactorParams& params) {
  return occlusion_factor<double>(pose, occluder.position, target, params);
}

/// Back-light factor: parabola anchored at the target and opening along the
/// light's propagation direction, i.e. on the side where the sensor looks
/// into the light.
template <typename Scalar>
Scalar light_factor(const Pose2<Scalar>& pose, Scalar light_direction,
                    const Vector2<Scalar>& target, const FactorParams& params) {
  const Vector2<Scalar> axis(std::cos(light_direction), std::sin(light_direction));
  return parabolic_factor<Scalar>(pose.position(), target, axis, Scalar(params.delta),
                                  Scalar(params.width));
}

inline double light_factor(const Pose& pose, const LightSource& light, const Vec2& target,
                           const FactorParams& params) {
  return light_factor<double>(pose, light.direction, target, params);
}

/// Redundancy with a past viewpoint: 1 + delta * exp(-|p - p_i|^2 / (2 sigma^2)).
/// Uses position only unless `heading_weight` > 0, in which case the squared
/// wrapped heading difference scaled by heading_weight^2 is added.
template <typename Scalar>
Scalar redundancy_factor(const Pose2<Scalar>& pose, const Pose2<Scalar>& past,
                         const FactorParams& params, Scalar heading_weight = Scalar(0)) {
  Scalar d2 = squared_distance(pose, past);
  if (heading_weight > Scalar(0)) {
    const Scalar dh = wrap_angle(pose.heading - past.heading) * heading_weight;
    d2 += dh * dh;
  }
  const Scalar sigma = Scalar(params.sigma);
  return Scalar(1) + Scalar(params.delta) * std::exp(-d2 / (Scalar(2) * sigma * sigma));
}

}  // namespace percept
