#include "lieprob/baseline_filter.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "lieprob/errors.hpp"

namespace lieprob {

namespace {

struct KernelTerms {
  double k;
  double d;
  double inv_l2;
};

KernelTerms terms(const KernelParams& kernel, double a, double b) {
  const double inv_l2 = 1.0 / (kernel.lengthscale * kernel.lengthscale);
  const double d = a - b;
  return {kernel.variance * std::exp(-0.5 * d * d * inv_l2), d, inv_l2};
}

// Covariance between observation kinds at a and b (value or derivative).
double covariance(const KernelParams& kernel, double a, bool a_value, double b, bool b_value) {
  const KernelTerms t = terms(kernel, a, b);
  if (a_value && b_value) return t.k;
  if (a_value) return t.k * t.d * t.inv_l2;   // cov(y(a), y'(b))
  if (b_value) return -t.k * t.d * t.inv_l2;  // cov(y'(a), y(b))
  return t.k * (t.inv_l2 - t.d * t.d * t.inv_l2 * t.inv_l2);
}

void validate(const FilterConfig& config) {
  if (!(config.sigma > 0.0)) throw ArgumentError("filter sigma must be positive");
  if (!(config.kernel.variance > 0.0) || !(config.kernel.lengthscale > 0.0)) {
    throw ArgumentError("filter kernel parameters must be positive");
  }
}

FilterState run(const GradientField& field, const FilterConfig& config, double noise_variance,
                std::optional<AncillaryPerturbation> perturbation) {
  FilterState state{{}, GaussianDerivativeModel(config.kernel, config.jitter, field.x0, field.y0)};
  // The initial pair lies on the solution curve, so a0 is exact.
  const double a0 = field.f(field.x0, field.y0);
  if (!std::isfinite(a0)) throw NumericalError("f is not finite at the initial condition");
  state.steps.push_back({field.x0, field.y0, a0});
  state.belief.add_derivative(field.x0, a0, 0.0);

  const double h = config.n > 0 ? config.step(field) : 0.0;
  for (std::size_t i = 1; i <= config.n; ++i) {
    const double x = field.x0 + static_cast<double>(i) * h;
    const double y = state.belief.mean(x);
    double y_input = y;
    if (perturbation && perturbation->index == i) y_input += perturbation->delta;
    const double a = field.f(x, y_input);
    if (!std::isfinite(a)) throw NumericalError("f is not finite at a filter step");
    state.steps.push_back({x, y, a});
    state.belief.add_derivative(x, a, noise_variance);
  }
  return state;
}

}  // namespace

double FilterConfig::step(const GradientField& field) const {
  if (n == 0) throw ArgumentError("mesh size must be at least one");
  return (field.x_domain.hi - field.x0) / static_cast<double>(n);
}

GaussianDerivativeModel::GaussianDerivativeModel(KernelParams kernel, double jitter, double x0, double y0)
    : kernel_(kernel), jitter_(jitter) {
  xs_.push_back(x0);
  is_value_.push_back(true);
  values_.push_back(y0);
  noise_.push_back(0.0);
  refactor();
}

void GaussianDerivativeModel::add_derivative(double x, double value, double noise_variance) {
  xs_.push_back(x);
  is_value_.push_back(false);
  values_.push_back(value);
  noise_.push_back(noise_variance);
  refactor();
}

void GaussianDerivativeModel::refactor() {
  const auto n = static_cast<Eigen::Index>(xs_.size());
  gram_.resize(n, n);
  Eigen::VectorXd obs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      gram_(i, j) = covariance(kernel_, xs_[ui], is_value_[ui], xs_[uj], is_value_[uj]);
    }
    // No jitter on the value row: the derivative block alone keeps the
    // matrix positive definite and y(x0) = y0 is then reproduced exactly.
    gram_(i, i) += noise_[ui] + (is_value_[ui] ? 0.0 : jitter_);
    obs[i] = values_[ui];
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram_);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw NumericalError("filter kernel matrix is not invertible");
  }
  alpha_ = ldlt.solve(obs);
  if (!alpha_.allFinite()) throw NumericalError("filter kernel solve produced non-finite weights");
}

Eigen::VectorXd GaussianDerivativeModel::cross(double x) const {
  Eigen::VectorXd c(static_cast<Eigen::Index>(xs_.size()));
  for (std::size_t j = 0; j < xs_.size(); ++j) {
    c[static_cast<Eigen::Index>(j)] = covariance(kernel_, x, true, xs_[j], is_value_[j]);
  }
  return c;
}

double GaussianDerivativeModel::mean(double x) const { return cross(x).dot(alpha_); }

double GaussianDerivativeModel::variance(double x) const {
  const Eigen::VectorXd c = cross(x);
  return std::max(0.0, kernel_.variance - c.dot(gram_.ldlt().solve(c)));
}

FilterState run_filter(const GradientField& field, const FilterConfig& config,
                       std::optional<AncillaryPerturbation> perturbation) {
  validate(config);
  return run(field, config, config.sigma * config.sigma, perturbation);
}

double predictive_mean(const FilterState& state, double x) { return state.belief.mean(x); }

double ancillarity_sensitivity(const GradientField& field, const FilterConfig& config, double delta) {
  const FilterState base = run_filter(field, config);
  const FilterState moved = run_filter(field, config, AncillaryPerturbation{1, delta});
  double sup = 0.0;
  for (const FilterStep& step : base.steps) {
    sup = std::max(sup, std::abs(base.belief.mean(step.x) - moved.belief.mean(step.x)));
  }
  return sup;
}

GaussianDerivativeModel noise_free_reference(const GradientField& field, const FilterConfig& config) {
  validate(config);
  return run(field, config, 0.0, std::nullopt).belief;
}

}  // namespace lieprob
