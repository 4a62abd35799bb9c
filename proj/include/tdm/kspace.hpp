#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <Eigen/Core>

#include "tdm/embed_core.hpp"
#include "tdm/errors.hpp"
#include "tdm/mds_iterative.hpp"

namespace tdm {

/// Sectional curvature of the stereographic model, clamped to [-10, 10].
class Curvature {
public:
  static constexpr double kMin = -10.0;
  static constexpr double kMax = 10.0;

  Curvature() = default;
  explicit Curvature(double kappa) {
    if (!std::isfinite(kappa)) throw std::invalid_argument("curvature must be finite");
    value_ = std::clamp(kappa, kMin, kMax);
  }
  double value() const { return value_; }

private:
  double value_ = 0.0;
};

/// Below this magnitude the flat formulas are used.
inline constexpr double kFlatCurvature = 1e-12;

struct KLayout {
  Layout coords;
  Curvature kappa;
};

namespace detail {

template <typename DX>
Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, 1> to_column(const Eigen::MatrixBase<DX>& x) {
  Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, 1> v(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) v(k) = x.coeff(k);
  return v;
}

} // namespace detail

/// True if x lies in the model's domain (the open ball of radius
/// 1/sqrt(-kappa) when kappa < 0, everywhere otherwise).
template <typename DX>
bool in_domain(const Eigen::MatrixBase<DX>& x, typename DX::Scalar kappa) {
  return kappa >= 0 || -kappa * x.squaredNorm() < 1;
}

/// Mobius (gyrovector) addition in the kappa-stereographic model.
template <typename DX, typename DY>
Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, 1>
mobius_add(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y,
           typename DX::Scalar kappa) {
  using Scalar = typename DX::Scalar;
  if (x.size() != y.size()) throw DimensionMismatch("mobius_add operands differ in dimension");
  if (!in_domain(x, kappa) || !in_domain(y, kappa))
    throw DomainViolation("mobius_add operand outside the curvature domain");
  const auto xc = detail::to_column(x);
  const auto yc = detail::to_column(y);
  const Scalar xy = xc.dot(yc);
  const Scalar x2 = xc.squaredNorm();
  const Scalar y2 = yc.squaredNorm();
  const Scalar denom = Scalar(1) - Scalar(2) * kappa * xy + kappa * kappa * x2 * y2;
  if (std::abs(denom) < Scalar(1e-14)) throw DegenerateDenominator("mobius_add denominator vanishes");
  const Scalar a = Scalar(1) - Scalar(2) * kappa * xy - kappa * y2;
  const Scalar b = Scalar(1) + kappa * x2;
  return (a * xc + b * yc) / denom;
}

/// arctan_kappa: arctan(sqrt(k) u) / sqrt(k) for k > 0, artanh(sqrt(-k) u) /
/// sqrt(-k) for k < 0 and u itself in the flat limit. The artanh argument is
/// held below 1 so rounding at the ball boundary cannot produce inf or NaN.
template <typename Scalar>
Scalar tan_k_inverse(Scalar u, Scalar kappa) {
  if (std::abs(kappa) < Scalar(kFlatCurvature)) return u;
  if (kappa > 0) {
    const Scalar s = std::sqrt(kappa);
    return std::atan(s * u) / s;
  }
  const Scalar s = std::sqrt(-kappa);
  return std::atanh(std::min(s * u, std::nextafter(Scalar(1), Scalar(0)))) / s;
}

/// Geodesic distance 2 arctan_kappa(|(-x) (+) y|); tends to 2|x - y| as
/// kappa -> 0. For kappa > 0 antipodal pairs evaluate to pi / sqrt(kappa)
/// and set *clamped.
template <typename DX, typename DY>
typename DX::Scalar k_distance(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y,
                               typename DX::Scalar kappa, bool* clamped = nullptr) {
  using Scalar = typename DX::Scalar;
  if (x.size() != y.size()) throw DimensionMismatch("k_distance operands differ in dimension");
  if (!in_domain(x, kappa) || !in_domain(y, kappa))
    throw DomainViolation("k_distance operand outside the curvature domain");
  if (detail::to_column(x) == detail::to_column(y)) return Scalar(0);
  if (std::abs(kappa) < Scalar(kFlatCurvature))
    return Scalar(2) * (detail::to_column(y) - detail::to_column(x)).norm();
  Scalar u;
  try {
    u = mobius_add((-detail::to_column(x)).eval(), y, kappa).norm();
  } catch (const DegenerateDenominator&) {
    if (kappa < 0) throw;
    if (clamped) *clamped = true;
    u = std::numeric_limits<Scalar>::infinity();
  }
  return Scalar(2) * tan_k_inverse(u, kappa);
}

/// Stress with the embedded distance d_kappa / 2, so kappa = 0 matches stress().
StressReport<double> k_stress(const KLayout& kl, const Eigen::MatrixXd& d, const Eigen::MatrixXd& w,
                              bool* clamped = nullptr);

/// Euclidean gradient of the raw k_stress with respect to the coordinates at
/// fixed curvature, using the closed form |(-x) (+) y| = |x - y| / sqrt(1 +
/// 2k<x,y> + k^2 |x|^2 |y|^2). Coincident and antipodal pairs contribute zero.
Eigen::MatrixXd k_stress_gradient(const KLayout& kl, const Eigen::MatrixXd& d,
                                  const Eigen::MatrixXd& w, bool* clamped = nullptr);

/// k_stress_gradient with row i scaled by (1 + kappa |x_i|^2)^2 / 4.
Eigen::MatrixXd k_riemannian_gradient(const KLayout& kl, const Eigen::MatrixXd& d,
                                      const Eigen::MatrixXd& w, bool* clamped = nullptr);

/// For kappa < 0 pulls every point with |x| >= (1 - 1e-5) / sqrt(-kappa)
/// radially back onto that radius; identity otherwise.
KLayout retract(KLayout kl);

struct JointOptions {
  int steps = 2000;
  double lr_x = 0.05;
  double lr_kappa = 0.01;
  /// Leading steps that move only the coordinates, kappa held at its start.
  int warmup_steps = 200;
  double initial_kappa = 0.0;
  std::uint64_t seed = 0;
};

struct KRunResult {
  KLayout layout;
  RunRecord record;
};

/// Alternating Riemannian descent on the coordinates and finite-difference
/// descent on the curvature.
KRunResult optimize_joint(const Eigen::MatrixXd& d, const Eigen::MatrixXd& w, Eigen::Index dims,
                          const JointOptions& opts = {});

} // namespace tdm
