#include "tdm/embed_core.hpp"

#include <string>

#include <Eigen/SVD>

namespace tdm {

Alignment procrustes_align(const Layout& a, const Layout& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("procrustes_align needs layouts of equal shape");
  const Eigen::Index n = a.rows();
  if (n == 0) return {b, 0.0};

  const Eigen::RowVectorXd mean_a = a.colwise().mean();
  const Eigen::RowVectorXd mean_b = b.colwise().mean();
  const Eigen::MatrixXd ca = a.rowwise() - mean_a;
  const Eigen::MatrixXd cb = b.rowwise() - mean_b;

  // Rows transform as b_i R, with R = U V^T from the SVD of cb^T ca.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cb.transpose() * ca, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd rotation = svd.matrixU() * svd.matrixV().transpose();

  Alignment out;
  out.aligned = (cb * rotation).rowwise() + mean_a;
  out.residual = std::sqrt((a - out.aligned).squaredNorm() / static_cast<double>(n));
  return out;
}

Eigen::VectorXd encode_lookup(const EmbeddingTable& table, Eigen::Index i) {
  if (i < 0 || i >= table.cols())
    throw IndexOutOfRange("embedding lookup index " + std::to_string(i) + " outside [0, " +
                          std::to_string(table.cols()) + ")");
  return table.z.col(i);
}

} // namespace tdm
