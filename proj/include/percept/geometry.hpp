#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include <Eigen/Core>

namespace percept {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar angle) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar wrapped = std::remainder(angle, Scalar(2) * pi);
  if (wrapped <= -pi) wrapped += Scalar(2) * pi;
  return wrapped;
}

/// Sensor viewpoint in the plane. Heading is kept in (-pi, pi].
template <typename Scalar>
struct Pose2 {
  Scalar x{0};
  Scalar y{0};
  Scalar heading{0};

  Pose2() = default;
  Pose2(Scalar x_, Scalar y_, Scalar heading_)
      : x(x_), y(y_), heading(wrap_angle(heading_)) {}

  Vector2<Scalar> position() const { return {x, y}; }

  friend bool operator==(const Pose2&, const Pose2&) = default;
};

using Pose = Pose2<double>;
using Vec2 = Vector2<double>;
using Mat2 = Matrix2<double>;

template <typename Scalar>
struct RangeBearing {
  Scalar range;
  Scalar bearing;
};

/// Range and heading-relative bearing from a pose to a point.
template <typename Scalar>
RangeBearing<Scalar> relative_range_bearing(const Pose2<Scalar>& pose,
                                            const Vector2<Scalar>& point) {
  const Scalar dx = point.x() - pose.x;
  const Scalar dy = point.y() - pose.y;
  return {std::hypot(dx, dy), wrap_angle(std::atan2(dy, dx) - pose.heading)};
}

template <typename Scalar>
Scalar squared_distance(const Pose2<Scalar>& a, const Pose2<Scalar>& b) {
  return (a.position() - b.position()).squaredNorm();
}

}  // namespace percept
