#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tdm/errors.hpp"
#include "tdm/road_graph.hpp"

namespace tdm {

/// Symmetric N x N shortest travel times in seconds, zero diagonal.
using TimeDistanceMatrix = Eigen::MatrixXd;
/// Symmetric nonnegative stress weights with zero diagonal.
using WeightMatrix = Eigen::MatrixXd;

enum class Symmetrization { Mean, Min, Max };

/// Directed minimum travel times; +inf where j is unreachable from i.
Eigen::MatrixXd all_pairs_times(const RoadGraph& g);

/// Throws DisconnectedPair when both directions of a pair are infinite.
TimeDistanceMatrix symmetrize(const Eigen::MatrixXd& directed,
                              Symmetrization policy = Symmetrization::Mean);

/// w_ij = d_ij^-alpha off the diagonal, alpha in {0, 1, 2}.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
weights(const Eigen::MatrixBase<Derived>& d, int alpha = 2) {
  using Scalar = typename Derived::Scalar;
  if (alpha < 0 || alpha > 2) throw std::invalid_argument("alpha must be 0, 1 or 2");
  if (d.rows() != d.cols()) throw DimensionMismatch("distance matrix must be square");
  const Eigen::Index n = d.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> w =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const Scalar dij = d(i, j);
      if (alpha == 0) {
        w(i, j) = Scalar(1);
        continue;
      }
      if (dij == Scalar(0))
        throw ZeroDistance(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      w(i, j) = alpha == 1 ? Scalar(1) / dij : Scalar(1) / (dij * dij);
    }
  }
  return w;
}

/// Number of unordered vertex pairs, n(n - 1) / 2.
constexpr std::size_t pair_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

/// Groups of vertices joined by finite travel time in at least one direction.
std::vector<std::vector<std::size_t>> reachability_components(const Eigen::MatrixXd& directed);

struct LabeledMatrix {
  std::vector<std::string> ids;
  Eigen::MatrixXd values;
};

/// CSV: header row of vertex ids, then one row per vertex; `inf` marks
/// unreachable entries.
void write_matrix_csv(std::ostream& out, const std::vector<std::string>& ids,
                      const Eigen::MatrixXd& m);
LabeledMatrix read_matrix_csv(std::istream& in);

} // namespace tdm
