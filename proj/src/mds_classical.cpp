#include "tdm/mds_classical.hpp"

#include <cmath>
#include <stdexcept>

#include "tdm/jacobi.hpp"

namespace tdm {

ClassicalMds classical_mds_full(const Eigen::MatrixXd& d, Eigen::Index dims) {
  const Eigen::Index n = d.rows();
  if (n < 1) throw std::invalid_argument("classical_mds needs at least one point");
  if (dims < 1 || dims > n) throw std::invalid_argument("classical_mds needs 1 <= dims <= n");

  const Eigen::MatrixXd b = double_center(d);
  const auto eig = jacobi_eigen(b);

  ClassicalMds out;
  out.eigenvalues = eig.values;
  out.sweeps = eig.sweeps;
  for (Eigen::Index k = 0; k < n; ++k)
    if (eig.values(k) < 0.0) out.negative_mass -= eig.values(k);

  // Entries below this are treated as zero when fixing the sign.
  constexpr double sign_eps = 1e-12;
  out.coords = Layout::Zero(n, dims);
  for (Eigen::Index k = 0; k < dims; ++k) {
    const double lambda = eig.values(k);
    if (!(lambda > 0.0)) continue;
    Eigen::VectorXd v = eig.vectors.col(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > sign_eps) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    }
    out.coords.col(k) = std::sqrt(lambda) * v;
  }
  return out;
}

} // namespace tdm
