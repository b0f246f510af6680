#pragma once

#include <functional>
#include <string>

#include "lieprob/bayes_solver.hpp"
#include "lieprob/experiment/config.hpp"
#include "lieprob/symmetry_ode.hpp"

namespace lieprob::experiment {

/// dy/dx = F(y/x) on [1, x_T], its canonical chart and the reduced problem.
struct Problem {
  GradientField field;
  CanonicalChart chart;
  QuadratureProblem quadrature;
};

[[nodiscard]] GradientField make_field(const ProblemConfig& config);
[[nodiscard]] Problem build_problem(const RunConfig& config);

/// Prior for a given design size per the [model] section.
[[nodiscard]] ModelBuilder model_builder(const RunConfig& config, const QuadratureProblem& problem);

/// scaling (x, y), x_translation (1, 0), y_translation (0, 1), rotation (-y, x).
[[nodiscard]] LieVectorField named_field(const std::string& name);

/// y(x) with y(1) = y0. Closed form x sqrt(2 ln x + y0^2) for F = 1/u + u,
/// otherwise adaptive Dormand-Prince integration at tolerance 1e-13.
[[nodiscard]] std::function<double(double)> exact_solution(const ProblemConfig& config);

/// Always integrates numerically; used to cross-check the closed form.
[[nodiscard]] double integrate_solution(const ProblemConfig& config, double x);

}  // namespace lieprob::experiment
