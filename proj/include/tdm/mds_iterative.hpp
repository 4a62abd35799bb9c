#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tdm/embed_core.hpp"
#include "tdm/random.hpp"

namespace tdm {

/// Per-iteration record of one optimizer run. trajectory[0] is the starting
/// layout, trajectory[t] the layout after t iterations.
struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<StressReport<double>> trajectory;
  StressReport<double> final;
  int iterations_used = 0;
  /// Set when a singular pair or antipodal distance had to be clamped.
  bool degenerate = false;
};

struct RunResult {
  Layout layout;
  RunRecord record;
};

// --- stress majorization -------------------------------------------------

/// Expansion point of the majorizing quadratic F^Z.
struct MajorizationState {
  Layout z_ref;
  Eigen::MatrixXd lw; // weighted Laplacian
  Eigen::MatrixXd lz; // Laplacian of w_ij d_ij / |Z_i - Z_j|
};

/// Throws CoincidentPoints if two reference points are closer than 1e-12.
MajorizationState make_majorization_state(const Layout& z_ref, const Eigen::MatrixXd& d,
                                          const Eigen::MatrixXd& w);

/// F^Z(X) = sum_{i<j} w_ij d_ij^2 + tr(X^T Lw X) - 2 tr(X^T Lz Z).
double bound_fz(const Layout& x, const MajorizationState& state, const Eigen::MatrixXd& d,
                const Eigen::MatrixXd& w);

/// One Gauss-Seidel sweep over the vertices, each move the exact minimizer of
/// F^Z in that vertex. Never increases stress relative to Z.
Layout majorize_step(const MajorizationState& state, const Eigen::MatrixXd& d,
                     const Eigen::MatrixXd& w);

enum class MajorizationInit { Classical, Random };

struct MajorizationOptions {
  int max_iter = 300;
  /// Stop once (prev - cur) / prev falls below this.
  double tol = 1e-7;
  /// Drives random initialization and coincident-pair directions.
  std::uint64_t seed = 0;
};

RunResult run_majorization(const Eigen::MatrixXd& d, const Eigen::MatrixXd& w, const Layout& init,
                           const MajorizationOptions& opts = {});
RunResult run_majorization(const Eigen::MatrixXd& d, const Eigen::MatrixXd& w, Eigen::Index dims,
                           MajorizationInit init, const MajorizationOptions& opts = {});

// --- stochastic gradient descent -----------------------------------------

/// Exponentially decaying step sizes eta(t) = eta_max * exp(-decay * t).
struct SgdSchedule {
  double eta_max = 1.0;
  double eta_min = 0.1;
  int iterations = 15;

  /// eta_max = 1 / min w, eta_min = eps / max w over pairs i < j.
  static SgdSchedule for_weights(const Eigen::MatrixXd& w, int iterations = 15, double eps = 0.1);

  /// Throws InvalidSchedule unless eta_max >= eta_min > 0 and iterations >= 1.
  void validate() const;
  double decay() const;
  double eta(int t) const;
};

/// Moves X_i and X_j symmetrically toward separation d_ij with step
/// min(w_ij * eta, 1). Throws CoincidentPoints.
void sgd_step(Layout& x, Eigen::Index i, Eigen::Index j, double d_ij, double w_ij, double eta);

/// Uniform random layout in [-h, h]^dims.
Layout random_layout(Eigen::Index n, Eigen::Index dims, double half_extent, Rng& rng);

/// Starts from random_layout with h = max d / 2, then one shuffled sweep over
/// all pairs per scheduled step size.
RunResult run_sgd(const Eigen::MatrixXd& d, const Eigen::MatrixXd& w, Eigen::Index dims,
                  const SgdSchedule& schedule, std::uint64_t seed);

// --- run statistics ------------------------------------------------------

struct RunStatistics {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  /// Population standard deviation over mean.
  double coefficient_of_variation = 0.0;
};

/// Statistics over final normalized stress. Throws TooFewRuns below two runs.
RunStatistics compare_runs(std::span<const RunRecord> records);

/// First recorded iteration whose normalized stress is at most threshold.
std::optional<int> iterations_to_reach(const RunRecord& record, double threshold);

} // namespace tdm
