#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace tdm {

/// Seeded generator with platform-independent derived distributions.
///
/// The standard distributions are implementation-defined, so the uniform
/// doubles, bounded integers and shuffles used by the optimizers are derived
/// here directly from the raw mt19937_64 stream.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Random unit vector in R^dims (normalized uniform cube sample).
  Eigen::VectorXd unit_vector(Eigen::Index dims) {
    Eigen::VectorXd v(dims);
    double n2 = 0.0;
    do {
      for (Eigen::Index k = 0; k < dims; ++k) v(k) = uniform(-1.0, 1.0);
      n2 = v.squaredNorm();
    } while (n2 < 1e-8 || n2 > 1.0);
    return v / std::sqrt(n2);
  }

private:
  std::mt19937_64 engine_;
};

} // namespace tdm
