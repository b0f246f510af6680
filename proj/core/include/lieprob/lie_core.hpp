#pragma once

// One-parameter Lie groups of point transformations, their infinitesimal
// generators, Lie-series exponentiation and numeric invariance checks.
//
// The group parameter is assumed additive throughout: composing the maps with
// parameters a and b equals the map with parameter a + b.

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lieprob/errors.hpp"
#include "lieprob/taylor.hpp"

namespace lieprob {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ScalarField = std::function<double(const Vector&)>;
using GradientMap = std::function<Vector(const Vector&)>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  [[nodiscard]] double width() const noexcept { return hi - lo; }
  [[nodiscard]] double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

struct GroupTransformation {
  int dimension = 0;
  std::function<Vector(const Vector&, double)> map;
  Interval eps_domain{-1.0, 1.0};
};

/// Infinitesimal xi(x) of a one-parameter group, i.e. the generator
/// X = xi . grad.
///
/// The Jacobian of xi is either supplied (analytic) or estimated by central
/// differences. Fields built with `from_generic` additionally carry a
/// power-series evaluator, which `lie_series` needs.
class LieVectorField {
 public:
  using VectorMap = std::function<Vector(const Vector&)>;
  using JacobianMap = std::function<Matrix(const Vector&)>;
  using SeriesMap = std::function<std::vector<Taylor>(const std::vector<Taylor>&)>;

  LieVectorField(int dimension, VectorMap xi, JacobianMap jacobian = {}, SeriesMap series = {});

  /// Wraps a functor callable as `f(const std::vector<T>&) -> std::vector<T>`
  /// for both T = double and T = Taylor. The Jacobian is obtained by
  /// forward-mode differentiation and is flagged analytic.
  template <class F>
  static LieVectorField from_generic(int dimension, F f);

  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  [[nodiscard]] Vector xi(const Vector& point) const;
  [[nodiscard]] Matrix jacobian(const Vector& point) const;
  [[nodiscard]] bool has_analytic_jacobian() const noexcept { return static_cast<bool>(jacobian_); }
  [[nodiscard]] bool has_series() const noexcept { return static_cast<bool>(series_); }
  [[nodiscard]] std::vector<Taylor> xi_series(const std::vector<Taylor>& point) const;

  /// The field multiplied by a constant.
  [[nodiscard]] LieVectorField scaled(double factor) const;

 private:
  int dimension_;
  VectorMap xi_;
  JacobianMap jacobian_;
  SeriesMap series_;
};

/// A scalar function paired with its gradient (analytic, or central
/// differences when none was given).
struct DifferentiableFunction {
  ScalarField value;
  GradientMap gradient;

  [[nodiscard]] Vector gradient_at(const Vector& point) const;
};

/// Builds a DifferentiableFunction from `f(const std::vector<T>&) -> T`,
/// differentiated exactly in forward mode.
template <class F>
DifferentiableFunction differentiable(F f);

struct CanonicalCoordinateSystem {
  int dimension = 0;
  /// r_1 ... r_n; the last one is translated by the group, the rest are invariant.
  std::vector<DifferentiableFunction> coordinates;
  /// Optional inverse map (r_1..r_n) -> x.
  std::function<Vector(const Vector&)> inverse;
};

struct LieSeriesResult {
  Vector value;
  /// Norm of the highest-order term that was summed.
  double last_term = 0.0;
  bool converged = true;
  std::string warning;
};

struct InvarianceReport {
  double max_abs = 0.0;
  bool pass = false;
};

struct CanonicalReport {
  /// max |X r_i| over i < n.
  double max_invariant_defect = 0.0;
  /// max |X r_n - 1|.
  double max_translation_defect = 0.0;
  bool pass = false;
};

inline constexpr double kInvarianceTolerance = 1e-8;
inline constexpr int kDefaultLieSeriesOrder = 30;

/// d/d eps of map(point, eps) at eps = 0, by central differences.
[[nodiscard]] Vector infinitesimal_of(const GroupTransformation& transform, const Vector& point);

/// xi(point) . gradF(point).
[[nodiscard]] double apply_generator(const LieVectorField& field, const ScalarField& F,
                                     const GradientMap& gradF, const Vector& point);
/// As above with gradF from central differences.
[[nodiscard]] double apply_generator(const LieVectorField& field, const ScalarField& F,
                                     const Vector& point);

/// Partial sum of exp(eps X) x through `max_order`. The terms X^k x / k! are
/// the Taylor coefficients of the flow of xi and are computed exactly by
/// power-series arithmetic on the field's series evaluator.
[[nodiscard]] LieSeriesResult lie_series(const LieVectorField& field, const Vector& point,
                                         double eps, int max_order = kDefaultLieSeriesOrder);

[[nodiscard]] InvarianceReport check_invariant_function(const LieVectorField& field,
                                                        const ScalarField& F,
                                                        const GradientMap& gradF,
                                                        const std::vector<Vector>& sample_points,
                                                        double tol = kInvarianceTolerance);

[[nodiscard]] CanonicalReport check_canonical(const LieVectorField& field,
                                              const CanonicalCoordinateSystem& coords,
                                              const std::vector<Vector>& sample_points,
                                              double tol = kInvarianceTolerance);

/// max || map(map(p, a), b) - map(p, a + b) || over the given triples.
[[nodiscard]] double group_law_defect(const GroupTransformation& transform,
                                      const std::vector<Vector>& points,
                                      const std::vector<std::pair<double, double>>& params);

/// max relative deviation of the field's Jacobian from central differences.
[[nodiscard]] double jacobian_consistency(const LieVectorField& field,
                                          const std::vector<Vector>& points);

// Standard groups and fields.
[[nodiscard]] GroupTransformation rotation_group();
[[nodiscard]] GroupTransformation translation_group(const Vector& direction);
[[nodiscard]] GroupTransformation scaling_group(int dimension);

[[nodiscard]] LieVectorField rotation_field();
[[nodiscard]] LieVectorField scaling_field(int dimension);
[[nodiscard]] LieVectorField translation_field(const Vector& direction);
[[nodiscard]] LieVectorField zero_field(int dimension);

/// (sqrt(x1^2 + x2^2), atan(x2 / x1)) on x1 > 0.
[[nodiscard]] CanonicalCoordinateSystem polar_coordinates();

// ---------------------------------------------------------------------------

namespace detail {

template <class T>
std::vector<T> to_std(const Vector& v);

template <>
inline std::vector<double> to_std<double>(const Vector& v) {
  return {v.data(), v.data() + v.size()};
}

inline Vector from_std(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Seeds coordinate j with unit derivative, all others constant.
inline std::vector<Taylor> seed_direction(const Vector& point, Eigen::Index j) {
  std::vector<Taylor> x;
  x.reserve(static_cast<std::size_t>(point.size()));
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    x.push_back(i == j ? Taylor::variable(point[i], 1) : Taylor(point[i], 1));
  }
  return x;
}

}  // namespace detail

template <class F>
LieVectorField LieVectorField::from_generic(int dimension, F f) {
  VectorMap xi = [f](const Vector& p) {
    return detail::from_std(f(detail::to_std<double>(p)));
  };
  JacobianMap jac = [f](const Vector& p) {
    Matrix J(p.size(), p.size());
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      const std::vector<Taylor> out = f(detail::seed_direction(p, j));
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        const Taylor& t = out[static_cast<std::size_t>(i)];
        J(i, j) = t.order() >= 1 ? t[1] : 0.0;
      }
    }
    return J;
  };
  SeriesMap series = [f](const std::vector<Taylor>& x) { return f(x); };
  return LieVectorField(dimension, std::move(xi), std::move(jac), std::move(series));
}

template <class F>
DifferentiableFunction differentiable(F f) {
  DifferentiableFunction out;
  out.value = [f](const Vector& p) { return static_cast<double>(f(detail::to_std<double>(p))); };
  out.gradient = [f](const Vector& p) {
    Vector g(p.size());
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      const Taylor t = f(detail::seed_direction(p, j));
      g[j] = t.order() >= 1 ? t[1] : 0.0;
    }
    return g;
  };
  return out;
}

}  // namespace lieprob
