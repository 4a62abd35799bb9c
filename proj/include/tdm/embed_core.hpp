#pragma once

#include <cmath>
#include <cstddef>

#include <Eigen/Core>

#include "tdm/errors.hpp"

namespace tdm {

/// N x D coordinates, one row per vertex, in the units of the distances.
using Layout = Eigen::MatrixXd;

template <typename Scalar>
struct StressReport {
  Scalar raw = 0;
  /// raw / sum_{i<j} w_ij d_ij^2, or raw itself when that sum vanishes.
  Scalar normalized = 0;
};

namespace detail {

template <typename DX, typename DD, typename DW>
void check_dimensions(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DD>& d,
                      const Eigen::MatrixBase<DW>& w) {
  if (d.rows() != d.cols() || w.rows() != w.cols() || d.rows() != w.rows() ||
      x.rows() != d.rows())
    throw DimensionMismatch("layout, distance and weight matrices disagree in size");
}

} // namespace detail

/// sum_{i<j} w_ij d_ij^2, the stress of collapsing every point onto one.
template <typename DD, typename DW>
typename DD::Scalar stress_scale(const Eigen::MatrixBase<DD>& d, const Eigen::MatrixBase<DW>& w) {
  using Scalar = typename DD::Scalar;
  Scalar total(0);
  for (Eigen::Index j = 1; j < d.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) total += w(i, j) * d(i, j) * d(i, j);
  return total;
}

template <typename Scalar>
StressReport<Scalar> make_report(Scalar raw, Scalar scale) {
  return {raw, scale > Scalar(0) ? raw / scale : raw};
}

/// Weighted stress over unordered pairs:
/// sum_{i<j} w_ij (d_ij - |X_i - X_j|)^2.
template <typename DX, typename DD, typename DW>
StressReport<typename DX::Scalar> stress(const Eigen::MatrixBase<DX>& x,
                                         const Eigen::MatrixBase<DD>& d,
                                         const Eigen::MatrixBase<DW>& w) {
  using Scalar = typename DX::Scalar;
  detail::check_dimensions(x, d, w);
  Scalar raw(0);
  for (Eigen::Index j = 1; j < x.rows(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const Scalar r = (x.row(i) - x.row(j)).norm();
      const Scalar e = d(i, j) - r;
      raw += w(i, j) * e * e;
    }
  }
  return make_report(raw, stress_scale(d, w));
}

/// Analytic gradient of the raw stress with respect to every coordinate.
/// Throws CoincidentPoints below 1e-12 separation, where it is undefined.
template <typename DX, typename DD, typename DW>
Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, Eigen::Dynamic>
stress_gradient(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DD>& d,
                const Eigen::MatrixBase<DW>& w) {
  using Scalar = typename DX::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  detail::check_dimensions(x, d, w);
  Matrix grad = Matrix::Zero(x.rows(), x.cols());
  for (Eigen::Index j = 1; j < x.rows(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const auto diff = (x.row(i) - x.row(j)).eval();
      const Scalar r = diff.norm();
      if (r < Scalar(1e-12))
        throw CoincidentPoints(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      const Scalar c = Scalar(2) * w(i, j) * (r - d(i, j)) / r;
      grad.row(i) += c * diff;
      grad.row(j) -= c * diff;
    }
  }
  return grad;
}

/// Pairwise Euclidean distances of a layout.
template <typename DX>
Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, Eigen::Dynamic>
pairwise_distances(const Eigen::MatrixBase<DX>& x) {
  using Matrix = Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix out = Matrix::Zero(x.rows(), x.rows());
  for (Eigen::Index j = 1; j < x.rows(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) out(i, j) = out(j, i) = (x.row(i) - x.row(j)).norm();
  return out;
}

inline bool all_finite(const Layout& x) { return x.allFinite(); }

struct Alignment {
  Layout aligned;
  /// sqrt(sum_i |a_i - T(b_i)|^2 / n) at the optimal rigid motion T.
  double residual = 0.0;
};

/// Superimposes b onto a by the translation and orthogonal map (reflections
/// allowed) minimizing the summed squared point mismatch.
Alignment procrustes_align(const Layout& a, const Layout& b);

/// Direct-encoding table: column i is the embedding of vertex i.
struct EmbeddingTable {
  Eigen::MatrixXd z; // d x |V|

  Eigen::Index dims() const { return z.rows(); }
  Eigen::Index cols() const { return z.cols(); }
};

/// Z * e_i for the one-hot indicator e_i. Throws IndexOutOfRange.
Eigen::VectorXd encode_lookup(const EmbeddingTable& table, Eigen::Index i);

} // namespace tdm
