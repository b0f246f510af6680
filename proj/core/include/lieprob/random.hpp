#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace lieprob {

/// Seeded generator whose output is fixed by the C++ standard on every
/// platform. Distributions from <random> are implementation-defined, so the
/// real-valued draws are derived from the raw 64-bit stream here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    double u = 0.0;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// `count` points drawn uniformly from the box [lower, upper].
inline std::vector<Eigen::VectorXd> sample_box(const Eigen::VectorXd& lower,
                                               const Eigen::VectorXd& upper,
                                               std::size_t count,
                                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> points;
  points.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Eigen::VectorXd p(lower.size());
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
      p[i] = rng.uniform(lower[i], upper[i]);
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace lieprob
