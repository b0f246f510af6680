#pragma once

// Sequential Gaussian scheme for dy/dx = f(x, y): step forward by h, plug
// the predictive mean into f, and absorb the value as a noisy observation of
// y'. Kept as a non-Bayesian reference point for the exact solver.

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "lieprob/constrained_prior.hpp"
#include "lieprob/symmetry_ode.hpp"

namespace lieprob {

struct FilterConfig {
  std::size_t n = 16;
  double sigma = 1e-3;
  KernelParams kernel{1.0, 1.0};
  double jitter = kDefaultJitter;

  [[nodiscard]] double step(const GradientField& field) const;
};

struct FilterStep {
  double x = 0.0;
  /// Input fed to f: the predictive mean at x (or y0 at x0).
  double y = 0.0;
  /// a = f(x, y)
  double a = 0.0;
};

/// Gaussian belief over y given y(x0) = y0 (exact) and derivative
/// observations y'(x_i) = a_i with noise variances.
class GaussianDerivativeModel {
 public:
  GaussianDerivativeModel(KernelParams kernel, double jitter, double x0, double y0);

  void add_derivative(double x, double value, double noise_variance);
  [[nodiscard]] double mean(double x) const;
  [[nodiscard]] double variance(double x) const;
  [[nodiscard]] std::size_t observations() const noexcept { return xs_.size(); }

 private:
  void refactor();
  [[nodiscard]] Eigen::VectorXd cross(double x) const;

  KernelParams kernel_;
  double jitter_;
  std::vector<double> xs_;
  std::vector<bool> is_value_;
  std::vector<double> values_;
  std::vector<double> noise_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd alpha_;
};

struct FilterState {
  std::vector<FilterStep> steps;
  GaussianDerivativeModel belief;
};

/// Optional perturbation of one ancillary input: at step `index` the value fed
/// to f is y_index + delta. The recorded y stays the predictive mean.
struct AncillaryPerturbation {
  std::size_t index = 1;
  double delta = 0.0;
};

[[nodiscard]] FilterState run_filter(const GradientField& field, const FilterConfig& config,
                                     std::optional<AncillaryPerturbation> perturbation = std::nullopt);

[[nodiscard]] double predictive_mean(const FilterState& state, double x);

/// sup over the mesh of |mean - mean'| where mean' comes from a run whose
/// first evaluation used y_1 + delta.
[[nodiscard]] double ancillarity_sensitivity(const GradientField& field, const FilterConfig& config, double delta);

/// Same observations as the filter with zero noise: the regression the
/// filter approaches as sigma -> 0 when f does not depend on y.
[[nodiscard]] GaussianDerivativeModel noise_free_reference(const GradientField& field, const FilterConfig& config);

}  // namespace lieprob
