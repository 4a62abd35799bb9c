#include "tdm/mds_iterative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "tdm/errors.hpp"
#include "tdm/mds_classical.hpp"

namespace tdm {

namespace {

constexpr double kCoincident = 1e-12;
constexpr double kRoundingStress = 1e-24;

void check_square_pair(const Eigen::MatrixXd& d, const Eigen::MatrixXd& w) {
  if (d.rows() != d.cols() || w.rows() != w.cols() || d.rows() != w.rows())
    throw DimensionMismatch("distance and weight matrices disagree in size");
}

// Lz Z with per-pair unit directions; a coincident pair either throws or, given
// a generator, borrows a random direction for this update only.
Eigen::MatrixXd pull_vectors(const Layout& z, const Eigen::MatrixXd& d, const Eigen::MatrixXd& w,
                             Rng* rng, bool* degenerate) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < z.rows(); ++j) {
      Eigen::RowVectorXd diff = z.row(i) - z.row(j);
      const double r = diff.norm();
      Eigen::RowVectorXd unit;
      if (r < kCoincident) {
        if (rng == nullptr)
          throw CoincidentPoints(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        unit = rng->unit_vector(z.cols()).transpose();
        if (degenerate) *degenerate = true;
      } else {
        unit = diff / r;
      }
      const Eigen::RowVectorXd pull = w(i, j) * d(i, j) * unit;
      b.row(i) += pull;
      b.row(j) -= pull;
    }
  }
  return b;
}

Layout gauss_seidel_sweep(const Layout& z, const Eigen::MatrixXd& pull, const Eigen::MatrixXd& w) {
  Layout x = z;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double wsum = 0.0;
    Eigen::RowVectorXd acc = pull.row(i);
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
      if (j == i) continue;
      wsum += w(i, j);
      acc += w(i, j) * x.row(j);
    }
    if (wsum > 0.0) x.row(i) = acc / wsum;
  }
  return x;
}

void sgd_update(Layout& x, Eigen::Index i, Eigen::Index j, double d_ij, double w_ij, double eta,
                Rng* rng, bool* degenerate) {
  const double mu = std::min(w_ij * eta, 1.0);
  Eigen::RowVectorXd diff = x.row(i) - x.row(j);
  const double r = diff.norm();
  Eigen::RowVectorXd unit;
  if (r < kCoincident) {
    if (rng == nullptr)
      throw CoincidentPoints(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    unit = rng->unit_vector(x.cols()).transpose();
    if (degenerate) *degenerate = true;
  } else {
    unit = diff / r;
  }
  const Eigen::RowVectorXd move = mu * (0.5 * (r - d_ij)) * unit;
  x.row(i) -= move;
  x.row(j) += move;
}

double max_offdiag(const Eigen::MatrixXd& d) {
  double m = 0.0;
  for (Eigen::Index j = 1; j < d.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) m = std::max(m, d(i, j));
  return m;
}

void finish(RunRecord& rec) {
  rec.final = rec.trajectory.back();
  rec.iterations_used = static_cast<int>(rec.trajectory.size()) - 1;
}

} // namespace

MajorizationState make_majorization_state(const Layout& z_ref, const Eigen::MatrixXd& d,
                                          const Eigen::MatrixXd& w) {
  check_square_pair(d, w);
  if (z_ref.rows() != d.rows()) throw DimensionMismatch("reference layout size mismatch");
  const Eigen::Index n = d.rows();
  MajorizationState s{z_ref, Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double r = (z_ref.row(i) - z_ref.row(j)).norm();
      if (r < kCoincident)
        throw CoincidentPoints(static_cast<std::size_t>(std::min(i, j)),
                               static_cast<std::size_t>(std::max(i, j)));
      s.lw(i, j) = -w(i, j);
      s.lz(i, j) = -w(i, j) * d(i, j) / r;
    }
    s.lw(i, i) = -s.lw.row(i).sum();
    s.lz(i, i) = -s.lz.row(i).sum();
  }
  return s;
}

double bound_fz(const Layout& x, const MajorizationState& state, const Eigen::MatrixXd& d,
                const Eigen::MatrixXd& w) {
  if (x.rows() != state.z_ref.rows() || x.cols() != state.z_ref.cols())
    throw DimensionMismatch("layout and reference layout differ in shape");
  const double constant = stress_scale(d, w);
  const double quadratic = (x.transpose() * state.lw * x).trace();
  const double linear = (x.transpose() * state.lz * state.z_ref).trace();
  return constant + quadratic - 2.0 * linear;
}

Layout majorize_step(const MajorizationState& state, const Eigen::MatrixXd& d,
                     const Eigen::MatrixXd& w) {
  check_square_pair(d, w);
  return gauss_seidel_sweep(state.z_ref, state.lz * state.z_ref, w);
}

RunResult run_majorization(const Eigen::MatrixXd& d, const Eigen::MatrixXd& w, const Layout& init,
                           const MajorizationOptions& opts) {
  check_square_pair(d, w);
  if (init.rows() != d.rows()) throw DimensionMismatch("initial layout size mismatch");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("majorization tolerance must be positive");
  if (opts.max_iter < 0) throw std::invalid_argument("max_iter must be nonnegative");

  Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  RunResult out{init, {}};
  out.record.seed = opts.seed;
  out.record.trajectory.push_back(stress(out.layout, d, w));
  for (int it = 1; it <= opts.max_iter; ++it) {
    const auto pull = pull_vectors(out.layout, d, w, &rng, &out.record.degenerate);
    out.layout = gauss_seidel_sweep(out.layout, pull, w);
    const double prev = out.record.trajectory.back().raw;
    const auto cur = stress(out.layout, d, w);
    out.record.trajectory.push_back(cur);
    // A layout already at rounding level has no meaningful relative change left.
    if (prev <= 0.0 || cur.normalized < kRoundingStress || (prev - cur.raw) / prev < opts.tol) break;
  }
  finish(out.record);
  return out;
}

RunResult run_majorization(const Eigen::MatrixXd& d, const Eigen::MatrixXd& w, Eigen::Index dims,
                           MajorizationInit init, const MajorizationOptions& opts) {
  if (init == MajorizationInit::Classical) return run_majorization(d, w, classical_mds(d, dims), opts);
  Rng rng(opts.seed);
  return run_majorization(d, w, random_layout(d.rows(), dims, 0.5 * max_offdiag(d), rng), opts);
}

SgdSchedule SgdSchedule::for_weights(const Eigen::MatrixXd& w, int iterations, double eps) {
  double wmin = std::numeric_limits<double>::infinity();
  double wmax = 0.0;
  for (Eigen::Index j = 1; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) {
      if (w(i, j) <= 0.0) continue;
      wmin = std::min(wmin, w(i, j));
      wmax = std::max(wmax, w(i, j));
    }
  if (wmax == 0.0) return {1.0, 1.0, iterations};
  return {1.0 / wmin, eps / wmax, iterations};
}

void SgdSchedule::validate() const {
  if (iterations < 1) throw InvalidSchedule("schedule needs at least one iteration");
  if (!(eta_min > 0.0) || !(eta_max >= eta_min) || !std::isfinite(eta_max))
    throw InvalidSchedule("schedule needs eta_max >= eta_min > 0");
}

double SgdSchedule::decay() const {
  return iterations <= 1 ? 0.0 : std::log(eta_max / eta_min) / (iterations - 1);
}

double SgdSchedule::eta(int t) const { return eta_max * std::exp(-decay() * t); }

void sgd_step(Layout& x, Eigen::Index i, Eigen::Index j, double d_ij, double w_ij, double eta) {
  if (i < 0 || j < 0 || i >= x.rows() || j >= x.rows() || i == j)
    throw IndexOutOfRange("sgd_step needs two distinct valid rows");
  sgd_update(x, i, j, d_ij, w_ij, eta, nullptr, nullptr);
}

Layout random_layout(Eigen::Index n, Eigen::Index dims, double half_extent, Rng& rng) {
  Layout x(n, dims);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < dims; ++k) x(i, k) = rng.uniform(-half_extent, half_extent);
  return x;
}

RunResult run_sgd(const Eigen::MatrixXd& d, const Eigen::MatrixXd& w, Eigen::Index dims,
                  const SgdSchedule& schedule, std::uint64_t seed) {
  check_square_pair(d, w);
  schedule.validate();
  if (dims < 1) throw std::invalid_argument("dims must be positive");
  const Eigen::Index n = d.rows();

  Rng rng(seed);
  RunResult out{random_layout(n, dims, 0.5 * max_offdiag(d), rng), {}};
  out.record.seed = seed;
  out.record.trajectory.push_back(stress(out.layout, d, w));

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  for (int t = 0; t < schedule.iterations; ++t) {
    const double eta = schedule.eta(t);
    rng.shuffle(pairs);
    for (auto [i, j] : pairs)
      sgd_update(out.layout, i, j, d(i, j), w(i, j), eta, &rng, &out.record.degenerate);
    out.record.trajectory.push_back(stress(out.layout, d, w));
  }
  finish(out.record);
  return out;
}

RunStatistics compare_runs(std::span<const RunRecord> records) {
  if (records.size() < 2)
    throw TooFewRuns("run comparison needs at least two runs, got " + std::to_string(records.size()));
  RunStatistics s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& r : records) {
    const double v = r.final.normalized;
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(records.size());
  double var = 0.0;
  for (const auto& r : records) var += (r.final.normalized - s.mean) * (r.final.normalized - s.mean);
  var /= static_cast<double>(records.size());
  s.coefficient_of_variation = s.mean > 0.0 ? std::sqrt(var) / s.mean : 0.0;
  return s;
}

std::optional<int> iterations_to_reach(const RunRecord& record, double threshold) {
  for (std::size_t t = 0; t < record.trajectory.size(); ++t)
    if (record.trajectory[t].normalized <= threshold) return static_cast<int>(t);
  return std::nullopt;
}

} // namespace tdm
