#include "lieprob/experiment/problem.hpp"

#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "lieprob/errors.hpp"

namespace lieprob::experiment {

GradientField make_field(const ProblemConfig& config) {
  return homogeneous_field(config.F, config.x_T, config.y0, Interval{config.y_min, config.y_max});
}

Problem build_problem(const RunConfig& config) {
  config.validate();
  Problem p{make_field(config.problem), homogeneous_chart(config.problem.x_T, config.problem.y0), {}};
  p.quadrature = reduce_to_quadrature(p.field, p.chart, config.problem.r_max);
  return p;
}

ModelBuilder model_builder(const RunConfig& config, const QuadratureProblem& problem) {
  const KernelParams kernel{config.model.kernel_variance,
                            config.model.lengthscale_factor * (problem.r_domain.hi - problem.r0)};
  return [config, problem, kernel](std::size_t n) {
    return build_prior(problem, static_cast<Eigen::Index>(config.knots_for(n)), kernel, config.model.jitter);
  };
}

LieVectorField named_field(const std::string& name) {
  if (name == "scaling") return scaling_field(2);
  if (name == "x_translation") return translation_field(Vector::Unit(2, 0));
  if (name == "y_translation") return translation_field(Vector::Unit(2, 1));
  if (name == "rotation") return rotation_field();
  throw ArgumentError("unknown field '" + name + "'");
}

double integrate_solution(const ProblemConfig& config, double x) {
  namespace odeint = boost::numeric::odeint;
  if (!(x >= 1.0)) throw DomainError("solution is defined for x >= 1");
  double y = config.y0;
  if (x == 1.0) return y;
  const auto rhs = [&config](const double& state, double& dydx, double t) { dydx = config.F(state / t); };
  auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<double>());
  odeint::integrate_adaptive(stepper, rhs, y, 1.0, x, 1e-3 * (x - 1.0));
  if (!std::isfinite(y)) throw NumericalError("reference integration diverged before x = " + format_double(x));
  return y;
}

std::function<double(double)> exact_solution(const ProblemConfig& config) {
  if (config.F == LaurentProfile{{{-1, 1.0}, {1, 1.0}}}) {
    const double c = config.y0 * config.y0;
    return [c](double x) { return x * std::sqrt(2.0 * std::log(x) + c); };
  }
  return [config](double x) { return integrate_solution(config, x); };
}

}  // namespace lieprob::experiment
