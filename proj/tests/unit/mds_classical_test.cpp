#include <gtest/gtest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "tdm/families.hpp"
#include "tdm/jacobi.hpp"
#include "tdm/mds_classical.hpp"
#include "tdm/metric.hpp"

namespace tdm {
namespace {

Eigen::MatrixXd p3() {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  return d;
}

Layout random_points(std::mt19937_64& gen, int n, int dims) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  Layout x(n, dims);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < dims; ++k) x(i, k) = u(gen);
  return x;
}

TEST(DoubleCenter, P3) {
  Eigen::MatrixXd expected(3, 3);
  expected << 1, 0, -1, 0, 0, 0, -1, 0, 1;
  const auto b = double_center(p3());
  EXPECT_LE((b - expected).norm(), 1e-14);
  EXPECT_LE(b.rowwise().sum().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(DoubleCenter, SinglePoint) {
  const auto b = double_center(Eigen::MatrixXd::Zero(1, 1));
  ASSERT_EQ(b.rows(), 1);
  EXPECT_EQ(b(0, 0), 0.0);
}

TEST(DoubleCenter, RowSumsVanish) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = oracle::distance_matrix(random_points(gen, 2 + trial % 9, 3));
    EXPECT_LE(double_center(d).rowwise().sum().cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Jacobi, AgreesWithReferenceSolver) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 12;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = g(gen);
    a = (a + a.transpose()).eval();
    const auto mine = jacobi_eigen(a);
    EXPECT_TRUE(mine.converged);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    Eigen::VectorXd ref_desc = ref.eigenvalues().reverse();
    EXPECT_LE((mine.values - ref_desc).norm(), 1e-10 * (1.0 + a.norm()));
    for (int k = 0; k < n; ++k) {
      const Eigen::VectorXd v = mine.vectors.col(k);
      EXPECT_LE((a * v - mine.values(k) * v).norm(), 1e-8 * a.norm());
      EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    }
  }
}

TEST(Jacobi, DescendingOrder) {
  Eigen::Matrix3d a;
  a << 1, 0, 0, 0, 5, 0, 0, 0, 3;
  const auto r = jacobi_eigen(a);
  EXPECT_EQ(r.values(0), 5.0);
  EXPECT_EQ(r.values(1), 3.0);
  EXPECT_EQ(r.values(2), 1.0);
}

TEST(ClassicalMds, P3OneDimension) {
  const auto x = classical_mds(p3(), 1);
  EXPECT_NEAR(x(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(x(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(x(2, 0), -1.0, 1e-12);
}

TEST(ClassicalMds, SinglePointAtOrigin) {
  const auto x = classical_mds(Eigen::MatrixXd::Zero(1, 1), 1);
  ASSERT_EQ(x.rows(), 1);
  EXPECT_EQ(x(0, 0), 0.0);
}

TEST(ClassicalMds, RejectsBadDims) {
  EXPECT_THROW(classical_mds(p3(), 0), std::invalid_argument);
  EXPECT_THROW(classical_mds(p3(), 4), std::invalid_argument);
}

TEST(ClassicalMds, RecoversRandomPointSets) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int dims = 1 + trial % 3;
    const int n = dims + 1 + trial % 7;
    const Layout truth = random_points(gen, n, dims);
    const auto x = classical_mds(oracle::distance_matrix(truth), dims);
    EXPECT_LE(procrustes_align(truth, x).residual, 1e-6) << "trial " << trial;
  }
}

TEST(ClassicalMds, PerfectFitInNMinusOneDims) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 6;
    const auto d = oracle::distance_matrix(random_points(gen, n, 4));
    const auto x = classical_mds(d, n - 1);
    EXPECT_LE(stress(x, d, weights(d, 0)).raw, 1e-8 * d.squaredNorm() / 2.0);
  }
}

TEST(ClassicalMds, NegativeMassOnlyForNonEuclidean) {
  std::mt19937_64 gen(5);
  const auto euclid = classical_mds_full(oracle::distance_matrix(random_points(gen, 6, 2)), 2);
  EXPECT_LE(euclid.negative_mass, 1e-9);
  // The 5-cycle hop metric cannot be realized by any Euclidean point set.
  const auto c5 = symmetrize(all_pairs_times(cycle_graph(5)));
  EXPECT_GT(classical_mds_full(c5, 2).negative_mass, 1e-3);
}

TEST(ClassicalMds, SignConvention) {
  std::mt19937_64 gen(6);
  const auto r = classical_mds_full(oracle::distance_matrix(random_points(gen, 7, 3)), 3);
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < r.coords.rows(); ++i) {
      if (std::abs(r.coords(i, k)) > 1e-9) {
        EXPECT_GT(r.coords(i, k), 0.0);
        break;
      }
    }
  }
}

} // namespace
} // namespace tdm
