#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lieprob/random.hpp"

namespace lieprob {

/// row . x = rhs (equality) or row . x >= rhs (inequality).
struct LinearConstraint {
  Eigen::VectorXd row;
  double rhs = 0.0;
  std::string label;
};

struct SamplerParams {
  std::size_t n_samples = 200;
  std::size_t burn_in = 500;
  std::size_t thin = 5;
};

/// Draw from N(0, 1) conditioned on [lo, hi]; either end may be infinite.
[[nodiscard]] double sample_truncated_standard_normal(Rng& rng, double lo, double hi);

/// Gaussian N(mean, cov) restricted to {E x = d} and {A x >= b}.
///
/// The covariance is factored as L L^T and x = mean + L u with u standard
/// normal. Equalities are linear conditions on u; conditioning a standard
/// normal on an affine subspace only projects it, so u = u_p + P w with P an
/// orthonormal null-space basis and w ~ N(0, I). The inequalities become
/// C w >= t and coordinate-wise Gibbs updates of w have truncated N(0, 1)
/// full conditionals.
class TruncatedGaussianSampler {
 public:
  TruncatedGaussianSampler(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                           const std::vector<LinearConstraint>& equalities,
                           const std::vector<LinearConstraint>& inequalities);

  /// `n_samples` draws after discarding `burn_in` sweeps, keeping every
  /// `thin`-th sweep. Deterministic in `seed`.
  [[nodiscard]] std::vector<Eigen::VectorXd> sample(std::size_t n_samples, std::size_t burn_in,
                                                    std::size_t thin, std::uint64_t seed) const;

  /// Feasible starting point of the chain, in the original coordinates.
  [[nodiscard]] Eigen::VectorXd feasible_point() const { return map(start_); }
  /// Dimension of the free (whitened, equality-reduced) coordinates.
  [[nodiscard]] Eigen::Index free_dimension() const { return basis_.cols(); }
  /// Inequalities that still restrict the free coordinates.
  [[nodiscard]] std::size_t active_inequalities() const { return static_cast<std::size_t>(C_.rows()); }

 private:
  [[nodiscard]] Eigen::VectorXd map(const Eigen::VectorXd& w) const { return center_ + basis_ * w; }
  void find_feasible_start(const std::vector<std::string>& labels, const Eigen::MatrixXd& A,
                           const Eigen::VectorXd& b, const Eigen::MatrixXd& V, const Eigen::VectorXd& lambda);

  Eigen::VectorXd center_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd C_;
  Eigen::VectorXd t_;
  Eigen::VectorXd start_;
};

[[nodiscard]] std::vector<Eigen::VectorXd> sample_truncated_gaussian(
    const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
    const std::vector<LinearConstraint>& equalities,
    const std::vector<LinearConstraint>& inequalities, std::size_t n_samples, std::size_t burn_in,
    std::size_t thin, std::uint64_t seed);

/// Smallest (row . x - rhs) over the inequalities; negative means violated.
[[nodiscard]] double min_inequality_slack(const Eigen::VectorXd& x,
                                          const std::vector<LinearConstraint>& inequalities);
/// Largest |row . x - rhs| over the equalities.
[[nodiscard]] double max_equality_residual(const Eigen::VectorXd& x,
                                           const std::vector<LinearConstraint>& equalities);

}  // namespace lieprob
