#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/LU>

#include "percept/error.hpp"
#include "percept/geometry.hpp"
#include "percept/sensor.hpp"

namespace percept {

template <typename Scalar>
struct GaussianBelief {
  Vector2<Scalar> mean{Vector2<Scalar>::Zero()};
  Matrix2<Scalar> covariance{Matrix2<Scalar>::Identity()};
};

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct CategoricalBelief {
  VectorX<Scalar> probs;

  static CategoricalBelief uniform(int num_classes) {
    return {VectorX<Scalar>::Constant(num_classes, Scalar(1) / Scalar(num_classes))};
  }
};

template <typename Derived>
void require_spd(const Eigen::MatrixBase<Derived>& m, const char* where) {
  using Scalar = typename Derived::Scalar;
  const Scalar asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  const Scalar scale = std::max(Scalar(1), m.cwiseAbs().maxCoeff());
  Eigen::LLT<Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>> llt(m);
  if (!m.allFinite() || asym > Scalar(1e-9) * scale || llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << where << ": covariance not symmetric positive definite [" << m.format(
        Eigen::IOFormat(Eigen::FullPrecision, Eigen::DontAlignCols, ", ", "; ")) << "]";
    throw NumericalFailure(os.str());
  }
}

inline void require_psi(double psi) {
  if (!(psi >= 1.0) || !std::isfinite(psi))
    throw InvalidArgument("perceptual cost must be finite and >= 1");
}

/// Range-bearing observation of a static 2D point from a known pose.
template <typename Scalar>
struct RangeBearingModel {
  Matrix2<Scalar> base_covariance;

  static RangeBearingModel from_sigmas(Scalar sigma_range, Scalar sigma_bearing) {
    Matrix2<Scalar> r = Matrix2<Scalar>::Zero();
    r(0, 0) = sigma_range * sigma_range;
    r(1, 1) = sigma_bearing * sigma_bearing;
    return {r};
  }

  Vector2<Scalar> observe(const Pose2<Scalar>& pose, const Vector2<Scalar>& point) const {
    const auto rb = relative_range_bearing(pose, point);
    return {rb.range, rb.bearing};
  }

  /// d(range, bearing)/d(point), evaluated at `point`.
  Matrix2<Scalar> jacobian(const Pose2<Scalar>& pose, const Vector2<Scalar>& point) const {
    const Scalar dx = point.x() - pose.x;
    const Scalar dy = point.y() - pose.y;
    const Scalar r2 = dx * dx + dy * dy;
    if (!(r2 > Scalar(0)))
      throw DegenerateGeometry("range-bearing jacobian undefined at zero range");
    const Scalar r = std::sqrt(r2);
    Matrix2<Scalar> h;
    h << dx / r, dy / r, -dy / r2, dx / r2;
    return h;
  }
};

/// Posterior covariance of an update with noise `noise`, Joseph form,
/// symmetrised. Independent of the measurement value.
template <typename Scalar>
Matrix2<Scalar> joseph_update(const Matrix2<Scalar>& prior, const Matrix2<Scalar>& h,
                              const Matrix2<Scalar>& noise, Matrix2<Scalar>* gain = nullptr) {
  const Matrix2<Scalar> s = h * prior * h.transpose() + noise;
  const Matrix2<Scalar> k = prior * h.transpose() * s.inverse();
  const Matrix2<Scalar> a = Matrix2<Scalar>::Identity() - k * h;
  Matrix2<Scalar> post = a * prior * a.transpose() + k * noise * k.transpose();
  post = Scalar(0.5) * (post + post.transpose()).eval();
  if (gain) *gain = k;
  return post;
}

/// Covariance the EKF would reach after one measurement from `pose` with the
/// sensor noise scaled by `psi`, linearised at the current mean.
template <typename Scalar>
Matrix2<Scalar> predicted_covariance(const GaussianBelief<Scalar>& belief,
                                     const Pose2<Scalar>& pose,
                                     const RangeBearingModel<Scalar>& model, Scalar psi) {
  require_psi(double(psi));
  const Matrix2<Scalar> h = model.jacobian(pose, belief.mean);
  return joseph_update<Scalar>(belief.covariance, h, model.base_covariance * psi);
}

/// EKF measurement update with perceptual cost `psi` scaling the sensor
/// covariance. The bearing innovation is wrapped to (-pi, pi].
template <typename Scalar>
GaussianBelief<Scalar> ekf_update(const GaussianBelief<Scalar>& belief, const Pose2<Scalar>& pose,
                                  const Vector2<Scalar>& z, const RangeBearingModel<Scalar>& model,
                                  Scalar psi) {
  require_psi(double(psi));
  const Matrix2<Scalar> h = model.jacobian(pose, belief.mean);
  Vector2<Scalar> innovation = z - model.observe(pose, belief.mean);
  innovation(1) = wrap_angle(innovation(1));

  Matrix2<Scalar> k;
  GaussianBelief<Scalar> post;
  post.covariance = joseph_update<Scalar>(belief.covariance, h, model.base_covariance * psi, &k);
  post.mean = belief.mean + k * innovation;
  require_spd(post.covariance, "ekf_update");
  return post;
}

/// Overload on a simulated reading: a miss leaves the belief unchanged.
inline GaussianBelief<double> ekf_update(const GaussianBelief<double>& belief, const Pose& pose,
                                         const MetricMeasurement& z,
                                         const RangeBearingModel<double>& model, double psi) {
  require_psi(psi);
  if (z.is_miss()) return belief;
  return ekf_update<double>(belief, pose, Vec2(z.reading->range, z.reading->bearing), model, psi);
}

template <typename Scalar>
struct DirichletFusion {
  VectorX<Scalar> probs;
  Scalar concentration;
};

/// Categorical fusion with concentration parameters:
///   x_i ∝ prior_i^(a_prior / a_new) * z_i^(a_meas / a_new),  a_new = max(a_prior, a_meas).
template <typename Scalar>
DirichletFusion<Scalar> fuse_dirichlet(const VectorX<Scalar>& prior, const VectorX<Scalar>& z,
                                       Scalar prior_concentration, Scalar measurement_concentration) {
  if (prior.size() != z.size())
    throw InvalidArgument("categorical fusion: class count mismatch");
  const Scalar merged = std::max(prior_concentration, measurement_concentration);
  const Scalar prior_exp = prior_concentration / merged;
  const Scalar meas_exp = measurement_concentration / merged;
  VectorX<Scalar> post(prior.size());
  for (Eigen::Index i = 0; i < prior.size(); ++i) {
    const Scalar p = prior_exp == Scalar(1) ? prior(i) : std::pow(prior(i), prior_exp);
    const Scalar l = meas_exp == Scalar(1) ? z(i) : std::pow(z(i), meas_exp);
    post(i) = p * l;
  }
  const Scalar total = post.sum();
  if (!(total > Scalar(0)) || !std::isfinite(total))
    throw NumericalFailure("categorical fusion: prior and measurement have disjoint support");
  return {post / total, merged};
}

/// Fusion with measurement weight alpha = 1 / psi and unit prior
/// concentration, so the posterior is ∝ prior * z^alpha.
template <typename Scalar>
CategoricalBelief<Scalar> categorical_update(const CategoricalBelief<Scalar>& belief,
                                             const VectorX<Scalar>& z, Scalar psi) {
  require_psi(double(psi));
  return {fuse_dirichlet<Scalar>(belief.probs, z, Scalar(1), Scalar(1) / psi).probs};
}

inline CategoricalBelief<double> categorical_update(const CategoricalBelief<double>& belief,
                                                    const SemanticMeasurement& z, double psi) {
  require_psi(psi);
  if (z.is_miss()) return belief;
  return categorical_update<double>(belief, *z.confidences, psi);
}

/// Differential entropy in nats of a Gaussian with covariance `cov`.
template <typename Derived>
typename Derived::Scalar gaussian_entropy(const Eigen::MatrixBase<Derived>& cov) {
  using Scalar = typename Derived::Scalar;
  require_spd(cov, "gaussian_entropy");
  const Scalar n = Scalar(cov.rows());
  const Scalar two_pi_e = Scalar(2) * std::numbers::pi_v<Scalar> * std::numbers::e_v<Scalar>;
  return Scalar(0.5) * (n * std::log(two_pi_e) + std::log(cov.determinant()));
}

template <typename Scalar>
Scalar gaussian_entropy(const GaussianBelief<Scalar>& belief) {
  return gaussian_entropy(belief.covariance);
}

/// Shannon entropy in nats, with 0 ln 0 = 0.
template <typename Derived>
typename Derived::Scalar categorical_entropy(const Eigen::MatrixBase<Derived>& probs) {
  using Scalar = typename Derived::Scalar;
  Scalar h = 0;
  for (Eigen::Index i = 0; i < probs.size(); ++i)
    if (probs(i) > Scalar(0)) h -= probs(i) * std::log(probs(i));
  return h;
}

template <typename Scalar>
Scalar categorical_entropy(const CategoricalBelief<Scalar>& belief) {
  return categorical_entropy(belief.probs);
}

}  // namespace percept
