#pragma once

// Implicit prior on transformed paths for the homogeneous family:
//   s(r) = log r + log(x_T) * zeta(r),   zeta(r0) = 0,  0 <= zeta <= 1,  zeta' >= 0,
// with zeta piecewise linear on a knot grid and Gaussian knot coefficients
// truncated to those linear constraints.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "lieprob/symmetry_ode.hpp"
#include "lieprob/truncated_gaussian.hpp"

namespace lieprob {

struct KernelParams {
  double variance = 1.0;
  /// Squared-exponential length scale.
  double lengthscale = 0.3;
};

inline constexpr double kDefaultJitter = 1e-10;
inline constexpr double kInequalitySlack = -1e-10;
inline constexpr double kEqualityTolerance = 1e-8;

/// Gaussian hat-basis model with linear constraints; prior and posterior
/// share this shape (conditioning only appends equalities).
struct ConstrainedPathModel {
  Eigen::VectorXd knots;
  Eigen::VectorXd coef_mean;
  Eigen::MatrixXd coef_cov;
  std::vector<LinearConstraint> equalities;
  std::vector<LinearConstraint> inequalities;
  /// log(x_T)
  double scale = 1.0;
  Envelope envelope;

  [[nodiscard]] Eigen::Index size() const { return knots.size(); }
  [[nodiscard]] double r0() const { return knots[0]; }
  /// Index j of the knot interval [k_j, k_{j+1}] holding r (clamped).
  [[nodiscard]] Eigen::Index interval_of(double r) const;
};

/// One path: knot coefficients of zeta plus the evaluator for s(r).
class PathSample {
 public:
  PathSample(std::shared_ptr<const Eigen::VectorXd> knots, Eigen::VectorXd coefficients, double scale);

  [[nodiscard]] const Eigen::VectorXd& coefficients() const noexcept { return coefficients_; }
  [[nodiscard]] const Eigen::VectorXd& knots() const noexcept { return *knots_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }

  [[nodiscard]] double zeta(double r) const;
  [[nodiscard]] double s(double r) const;
  /// Right derivative ds/dr; on a knot the slope of the interval to its right.
  [[nodiscard]] double slope(double r) const;
  /// Constant d zeta / dr on knot interval j.
  [[nodiscard]] double zeta_slope(Eigen::Index interval) const;

 private:
  std::shared_ptr<const Eigen::VectorXd> knots_;
  Eigen::VectorXd coefficients_;
  double scale_;
};

struct ImplicitPrincipleCheck {
  /// x(r, s(r)) is nondecreasing on the check grid.
  bool well_defined = false;
  /// Number of consecutive grid points with equal x.
  std::size_t ties = 0;
  /// All x equal: the path collapses to a single abscissa.
  bool degenerate = false;

  explicit operator bool() const noexcept { return well_defined; }
};

/// Uniform knots on the problem's r-domain, zero mean, squared-exponential
/// covariance plus jitter, anchor/monotone/bound constraints.
[[nodiscard]] ConstrainedPathModel build_prior(const QuadratureProblem& problem, Eigen::Index n_knots,
                                               const KernelParams& kernel, double jitter = kDefaultJitter);

[[nodiscard]] std::vector<PathSample> sample_prior(const ConstrainedPathModel& model,
                                                   const SamplerParams& params, std::uint64_t seed);

/// Evaluates x(r, s(r)) on a grid of ten points per knot interval.
[[nodiscard]] ImplicitPrincipleCheck check_implicit_principle(const PathSample& sample,
                                                              const CanonicalChart& chart);
/// Same check for an arbitrary path s(r) on [r_lo, r_hi] with `points` grid points.
[[nodiscard]] ImplicitPrincipleCheck check_implicit_principle(const std::function<double(double)>& s,
                                                              const CanonicalChart& chart, Interval r_range,
                                                              std::size_t points);

/// Squared-exponential Gram matrix of the knots.
[[nodiscard]] Eigen::MatrixXd squared_exponential_gram(const Eigen::VectorXd& points, const KernelParams& kernel);

}  // namespace lieprob
