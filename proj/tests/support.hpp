#pragma once

#include <cmath>
#include <numbers>

#include "lieprob/bayes_solver.hpp"
#include "lieprob/random.hpp"
#include "lieprob/symmetry_ode.hpp"

namespace lieprob::support {

inline const double kE = std::exp(1.0);

/// dy/dx = x/y + y/x, y(1) = 0.1 on [1, e].
inline GradientField reference_field() {
  return homogeneous_field([](const auto& u) { return 1.0 / u + u; }, kE, 0.1, Interval{0.05, 5.0});
}

inline QuadratureProblem reference_problem(double r_max = 1.5) {
  return reduce_to_quadrature(reference_field(), homogeneous_chart(kE, 0.1), r_max);
}

/// y(x) = x sqrt(2 ln x + 0.01)
inline double reference_solution(double x) { return x * std::sqrt(2.0 * std::log(x) + 0.01); }

/// zeta of the exact path: (r^2 - 0.01) / 2.
inline double reference_zeta(double r) { return (r * r - 0.01) / 2.0; }

inline ModelBuilder reference_builder(const QuadratureProblem& q, double lengthscale_factor = 0.3,
                                  double variance = 1.0) {
  const KernelParams kernel{variance, lengthscale_factor * (q.r_domain.hi - q.r0)};
  return [q, kernel](std::size_t n) {
    return build_prior(q, static_cast<Eigen::Index>(std::max<std::size_t>(3, kKnotsPerDesignPoint * n)), kernel);
  };
}

/// Standard normal by Box-Muller, independent of the library's sampler.
inline double normal(Rng& rng) {
  const double u = rng.uniform_open();
  const double v = rng.uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace lieprob::support
