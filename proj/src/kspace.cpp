#include "tdm/kspace.hpp"

#include <cassert>

namespace tdm {

namespace {

constexpr double kRetractMargin = 1e-5;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 40;

void check_sizes(const KLayout& kl, const Eigen::MatrixXd& d, const Eigen::MatrixXd& w) {
  if (d.rows() != d.cols() || w.rows() != w.cols() || d.rows() != w.rows() ||
      kl.coords.rows() != d.rows())
    throw DimensionMismatch("layout, distance and weight matrices disagree in size");
}

double max_offdiag(const Eigen::MatrixXd& d) {
  double m = 0.0;
  for (Eigen::Index j = 1; j < d.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) m = std::max(m, d(i, j));
  return m;
}

void retract_in_place(Layout& x, double kappa) {
  if (kappa >= 0.0) return;
  const double radius = (1.0 - kRetractMargin) / std::sqrt(-kappa);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double r = x.row(i).norm();
    if (r >= radius) x.row(i) *= radius / r;
  }
}

[[maybe_unused]] bool layout_in_domain(const KLayout& kl) {
  for (Eigen::Index i = 0; i < kl.coords.rows(); ++i)
    if (!in_domain(kl.coords.row(i), kl.kappa.value())) return false;
  return kl.coords.allFinite();
}

} // namespace

StressReport<double> k_stress(const KLayout& kl, const Eigen::MatrixXd& d, const Eigen::MatrixXd& w,
                              bool* clamped) {
  check_sizes(kl, d, w);
  const double kappa = kl.kappa.value();
  const auto& x = kl.coords;
  double raw = 0.0;
  for (Eigen::Index j = 1; j < x.rows(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double e = d(i, j) - 0.5 * k_distance(x.row(i), x.row(j), kappa, clamped);
      raw += w(i, j) * e * e;
    }
  }
  return make_report(raw, stress_scale(d, w));
}

Eigen::MatrixXd k_stress_gradient(const KLayout& kl, const Eigen::MatrixXd& d,
                                  const Eigen::MatrixXd& w, bool* clamped) {
  check_sizes(kl, d, w);
  const double k = kl.kappa.value();
  const bool flat = std::abs(k) < kFlatCurvature;
  const auto& x = kl.coords;
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  for (Eigen::Index j = 1; j < x.rows(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const Eigen::RowVectorXd xi = x.row(i);
      const Eigen::RowVectorXd xj = x.row(j);
      const Eigen::RowVectorXd diff = xi - xj;
      const double r = diff.norm();
      if (r < 1e-15) continue;

      Eigen::RowVectorXd du_dxi, du_dxj;
      double u, dd_du;
      if (flat) {
        u = r;
        dd_du = 2.0;
        du_dxi = diff / r;
        du_dxj = -du_dxi;
      } else {
        const double x2 = xi.squaredNorm();
        const double y2 = xj.squaredNorm();
        const double denom = 1.0 + 2.0 * k * xi.dot(xj) + k * k * x2 * y2;
        if (denom < 1e-12) {
          if (clamped) *clamped = true;
          continue;
        }
        const double root = std::sqrt(denom);
        u = r / root;
        dd_du = 2.0 / (1.0 + k * u * u);
        const double c = r / (denom * root);
        du_dxi = diff / (r * root) - c * (k * xj + k * k * y2 * xi);
        du_dxj = -diff / (r * root) - c * (k * xi + k * k * x2 * xj);
      }
      const double half_dist = tan_k_inverse(u, k);
      const double coeff = w(i, j) * (half_dist - d(i, j)) * dd_du;
      grad.row(i) += coeff * du_dxi;
      grad.row(j) += coeff * du_dxj;
    }
  }
  return grad;
}

Eigen::MatrixXd k_riemannian_gradient(const KLayout& kl, const Eigen::MatrixXd& d,
                                      const Eigen::MatrixXd& w, bool* clamped) {
  Eigen::MatrixXd g = k_stress_gradient(kl, d, w, clamped);
  const double k = kl.kappa.value();
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    const double s = 1.0 + k * kl.coords.row(i).squaredNorm();
    g.row(i) *= 0.25 * s * s;
  }
  return g;
}

KLayout retract(KLayout kl) {
  retract_in_place(kl.coords, kl.kappa.value());
  return kl;
}

KRunResult optimize_joint(const Eigen::MatrixXd& d, const Eigen::MatrixXd& w, Eigen::Index dims,
                          const JointOptions& opts) {
  if (d.rows() != d.cols() || w.rows() != w.cols() || d.rows() != w.rows())
    throw DimensionMismatch("distance and weight matrices disagree in size");
  if (opts.steps < 1) throw std::invalid_argument("optimize_joint needs at least one step");
  if (opts.warmup_steps < 0) throw std::invalid_argument("warmup_steps must be nonnegative");
  if (dims < 1) throw std::invalid_argument("dims must be positive");

  Rng rng(opts.seed);
  KRunResult out;
  out.layout.kappa = Curvature(opts.initial_kappa);
  out.layout.coords = random_layout(d.rows(), dims, 0.5 * max_offdiag(d), rng);
  if (const double k0 = out.layout.kappa.value(); k0 < 0.0) {
    // Fit the random start inside half the ball radius.
    const double extent = out.layout.coords.rowwise().norm().maxCoeff();
    const double target = 0.5 / std::sqrt(-k0);
    if (extent > target) out.layout.coords *= target / extent;
  }
  out.record.seed = opts.seed;
  bool& flag = out.record.degenerate;
  out.record.trajectory.push_back(k_stress(out.layout, d, w, &flag));

  auto stress_at = [&](const Layout& x, double kappa) {
    KLayout probe{x, Curvature(kappa)};
    retract_in_place(probe.coords, probe.kappa.value());
    return k_stress(probe, d, w, &flag).raw;
  };

  // Each update starts from its configured step and halves it until the
  // sufficient-decrease test passes; a full step that already descends is
  // taken unchanged.
  auto accepts = [](double trial, double current, double decrease) {
    return std::isfinite(trial) && trial <= current - kArmijo * decrease;
  };

  for (int step = 0; step < opts.steps; ++step) {
    auto& kl = out.layout;
    const double kappa = kl.kappa.value();
    double current = stress_at(kl.coords, kappa);

    const Eigen::MatrixXd euclid = k_stress_gradient(kl, d, w, &flag);
    const Eigen::MatrixXd riem = k_riemannian_gradient(kl, d, w, &flag);
    const double slope_x = euclid.cwiseProduct(riem).sum();
    if (std::isfinite(slope_x) && slope_x > 0.0) {
      double t = opts.lr_x;
      for (int halving = 0; halving <= kMaxHalvings; ++halving, t *= 0.5) {
        Layout trial = kl.coords - t * riem;
        retract_in_place(trial, kappa);
        const double s_trial = stress_at(trial, kappa);
        if (accepts(s_trial, current, t * slope_x)) {
          kl.coords = std::move(trial);
          current = s_trial;
          break;
        }
      }
    }

    const double h = 1e-6 * std::max(1.0, std::abs(kappa));
    const double slope = step < opts.warmup_steps
                             ? 0.0
                             : (stress_at(kl.coords, kappa + h) - stress_at(kl.coords, kappa - h)) / (2.0 * h);
    if (!std::isfinite(slope)) {
      flag = true;
    } else if (slope != 0.0) {
      double t = opts.lr_kappa;
      for (int halving = 0; halving <= kMaxHalvings; ++halving, t *= 0.5) {
        const Curvature trial(kappa - t * slope);
        if (accepts(stress_at(kl.coords, trial.value()), current, t * slope * slope)) {
          kl.kappa = trial;
          break;
        }
      }
    }
    retract_in_place(kl.coords, kl.kappa.value());
    assert(layout_in_domain(kl));

    out.record.trajectory.push_back(k_stress(kl, d, w, &flag));
  }
  out.record.final = out.record.trajectory.back();
  out.record.iterations_used = static_cast<int>(out.record.trajectory.size()) - 1;
  return out;
}

} // namespace tdm
