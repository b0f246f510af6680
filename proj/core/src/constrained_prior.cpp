#include "lieprob/constrained_prior.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "lieprob/errors.hpp"

namespace lieprob {

namespace {

Eigen::VectorXd unit_row(Eigen::Index n, Eigen::Index i, double value = 1.0) {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
  row[i] = value;
  return row;
}

std::string indexed(const char* name, Eigen::Index i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}

}  // namespace

Eigen::Index ConstrainedPathModel::interval_of(double r) const {
  const Eigen::Index n = knots.size();
  const double* begin = knots.data();
  const double* it = std::upper_bound(begin, begin + n, r);
  const auto j = static_cast<Eigen::Index>(it - begin) - 1;
  return std::clamp<Eigen::Index>(j, 0, n - 2);
}

PathSample::PathSample(std::shared_ptr<const Eigen::VectorXd> knots, Eigen::VectorXd coefficients, double scale)
    : knots_(std::move(knots)), coefficients_(std::move(coefficients)), scale_(scale) {
  if (!knots_ || knots_->size() < 2 || knots_->size() != coefficients_.size()) {
    throw ArgumentError("path sample needs one coefficient per knot");
  }
}

double PathSample::zeta(double r) const {
  const Eigen::VectorXd& k = *knots_;
  const Eigen::Index n = k.size();
  if (r <= k[0]) return coefficients_[0];
  if (r >= k[n - 1]) return coefficients_[n - 1];
  const auto j = static_cast<Eigen::Index>(std::upper_bound(k.data(), k.data() + n, r) - k.data()) - 1;
  const double t = (r - k[j]) / (k[j + 1] - k[j]);
  return (1.0 - t) * coefficients_[j] + t * coefficients_[j + 1];
}

double PathSample::s(double r) const { return std::log(r) + scale_ * zeta(r); }

double PathSample::zeta_slope(Eigen::Index interval) const {
  const Eigen::VectorXd& k = *knots_;
  return (coefficients_[interval + 1] - coefficients_[interval]) / (k[interval + 1] - k[interval]);
}

double PathSample::slope(double r) const {
  const Eigen::VectorXd& k = *knots_;
  const Eigen::Index n = k.size();
  auto j = static_cast<Eigen::Index>(std::upper_bound(k.data(), k.data() + n, r) - k.data()) - 1;
  j = std::clamp<Eigen::Index>(j, 0, n - 2);
  return 1.0 / r + scale_ * zeta_slope(j);
}

Eigen::MatrixXd squared_exponential_gram(const Eigen::VectorXd& points, const KernelParams& kernel) {
  const Eigen::Index n = points.size();
  Eigen::MatrixXd K(n, n);
  const double inv = 1.0 / (2.0 * kernel.lengthscale * kernel.lengthscale);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = points[i] - points[j];
      K(i, j) = kernel.variance * std::exp(-d * d * inv);
    }
  }
  return K;
}

ConstrainedPathModel build_prior(const QuadratureProblem& problem, Eigen::Index n_knots,
                                 const KernelParams& kernel, double jitter) {
  if (n_knots < 3) throw ArgumentError("the path model needs at least three knots");
  if (!(kernel.variance > 0.0) || !(kernel.lengthscale > 0.0)) {
    throw ArgumentError("kernel variance and length scale must be positive");
  }
  if (!(jitter >= 0.0)) throw ArgumentError("jitter must be non-negative");
  if (!(problem.x_T > 1.0)) throw ArgumentError("the path model needs x_T > 1");

  ConstrainedPathModel model;
  model.knots = Eigen::VectorXd::LinSpaced(n_knots, problem.r_domain.lo, problem.r_domain.hi);
  model.knots[0] = problem.r0;
  model.coef_mean = Eigen::VectorXd::Zero(n_knots);
  model.coef_cov = squared_exponential_gram(model.knots, kernel);
  model.coef_cov.diagonal().array() += jitter;
  model.scale = problem.scale();
  model.envelope = problem.envelope;

  model.equalities.push_back({unit_row(n_knots, 0), 0.0, "anchor zeta(r0) = 0"});
  for (Eigen::Index j = 0; j + 1 < n_knots; ++j) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n_knots);
    row[j] = -1.0;
    row[j + 1] = 1.0;
    model.inequalities.push_back({std::move(row), 0.0, indexed("monotone", j)});
  }
  for (Eigen::Index j = 0; j < n_knots; ++j) {
    model.inequalities.push_back({unit_row(n_knots, j, -1.0), -1.0, indexed("upper", j)});
    model.inequalities.push_back({unit_row(n_knots, j), 0.0, indexed("lower", j)});
  }
  return model;
}

std::vector<PathSample> sample_prior(const ConstrainedPathModel& model, const SamplerParams& params,
                                     std::uint64_t seed) {
  const std::vector<Eigen::VectorXd> draws =
      sample_truncated_gaussian(model.coef_mean, model.coef_cov, model.equalities, model.inequalities,
                                params.n_samples, params.burn_in, params.thin, seed);
  auto knots = std::make_shared<const Eigen::VectorXd>(model.knots);
  std::vector<PathSample> samples;
  samples.reserve(draws.size());
  for (const Eigen::VectorXd& coef : draws) {
    const double slack = min_inequality_slack(coef, model.inequalities);
    const double residual = max_equality_residual(coef, model.equalities);
    if (slack < kInequalitySlack || residual > kEqualityTolerance) {
      std::ostringstream os;
      os << "sampler returned a path outside the constraint set (slack " << slack << ", residual "
         << residual << ")";
      throw InvariantViolation(os.str());
    }
    samples.emplace_back(knots, coef, model.scale);
  }
  return samples;
}

ImplicitPrincipleCheck check_implicit_principle(const std::function<double(double)>& s,
                                                const CanonicalChart& chart, Interval r_range,
                                                std::size_t points) {
  ImplicitPrincipleCheck check;
  check.well_defined = true;
  if (points < 2) points = 2;
  double previous = 0.0;
  double first = 0.0;
  bool all_equal = true;
  for (std::size_t i = 0; i < points; ++i) {
    const double r = r_range.lo + r_range.width() * static_cast<double>(i) / static_cast<double>(points - 1);
    const double x = chart.x_inv(r, s(r));
    if (i == 0) {
      first = x;
    } else {
      const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
      if (x < previous - tol) check.well_defined = false;
      if (std::abs(x - previous) <= tol) ++check.ties;
      if (std::abs(x - first) > tol) all_equal = false;
    }
    previous = x;
  }
  check.degenerate = all_equal;
  return check;
}

ImplicitPrincipleCheck check_implicit_principle(const PathSample& sample, const CanonicalChart& chart) {
  const Eigen::VectorXd& k = sample.knots();
  const auto intervals = static_cast<std::size_t>(k.size() - 1);
  return check_implicit_principle([&sample](double r) { return sample.s(r); }, chart,
                                  Interval{k[0], k[k.size() - 1]}, 10 * intervals + 1);
}

}  // namespace lieprob
