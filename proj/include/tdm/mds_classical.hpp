#pragma once

#include <Eigen/Core>

#include "tdm/embed_core.hpp"
#include "tdm/errors.hpp"

namespace tdm {

/// B = -1/2 J D^2 J, with J the centering projector.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
double_center(const Eigen::MatrixBase<Derived>& d) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (d.rows() != d.cols()) throw DimensionMismatch("double_center needs a square matrix");
  const Eigen::Index n = d.rows();
  if (n == 0) return Matrix(0, 0);
  const Matrix sq = d.cwiseProduct(d);
  const auto row_mean = sq.rowwise().mean().eval();
  const auto col_mean = sq.colwise().mean().eval();
  const Scalar grand = sq.mean();
  Matrix b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      b(i, j) = Scalar(-0.5) * (sq(i, j) - row_mean(i) - col_mean(j) + grand);
  return b;
}

struct ClassicalMds {
  Layout coords;
  /// Full spectrum of B, descending.
  Eigen::VectorXd eigenvalues;
  /// Sum of |lambda| over negative eigenvalues; zero for Euclidean input.
  double negative_mass = 0.0;
  int sweeps = 0;
};

/// Torgerson scaling: columns sqrt(lambda_k) v_k for the top dims eigenpairs,
/// negative eigenvalues clamped to zero. Each eigenvector is signed so that
/// its first nonzero entry is positive.
ClassicalMds classical_mds_full(const Eigen::MatrixXd& d, Eigen::Index dims);

inline Layout classical_mds(const Eigen::MatrixXd& d, Eigen::Index dims) {
  return classical_mds_full(d, dims).coords;
}

} // namespace tdm
