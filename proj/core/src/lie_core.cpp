#include "lieprob/lie_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lieprob/numdiff.hpp"

namespace lieprob {

LieVectorField::LieVectorField(int dimension, VectorMap xi, JacobianMap jacobian, SeriesMap series)
    : dimension_(dimension),
      xi_(std::move(xi)),
      jacobian_(std::move(jacobian)),
      series_(std::move(series)) {
  if (dimension_ <= 0) throw ArgumentError("vector field dimension must be positive");
  if (!xi_) throw ArgumentError("vector field requires an infinitesimal map");
}

Vector LieVectorField::xi(const Vector& point) const {
  if (point.size() != dimension_) throw ArgumentError("point dimension does not match field");
  return xi_(point);
}

Matrix LieVectorField::jacobian(const Vector& point) const {
  if (point.size() != dimension_) throw ArgumentError("point dimension does not match field");
  if (jacobian_) return jacobian_(point);
  return central_jacobian(xi_, point);
}

std::vector<Taylor> LieVectorField::xi_series(const std::vector<Taylor>& point) const {
  if (!series_) {
    throw ArgumentError("vector field has no power-series evaluator; build it with from_generic");
  }
  return series_(point);
}

LieVectorField LieVectorField::scaled(double factor) const {
  VectorMap xi = [inner = xi_, factor](const Vector& p) -> Vector { return factor * inner(p); };
  JacobianMap jac;
  if (jacobian_) {
    jac = [inner = jacobian_, factor](const Vector& p) -> Matrix { return factor * inner(p); };
  }
  SeriesMap series;
  if (series_) {
    series = [inner = series_, factor](const std::vector<Taylor>& x) {
      std::vector<Taylor> out = inner(x);
      for (Taylor& t : out) t *= factor;
      return out;
    };
  }
  return LieVectorField(dimension_, std::move(xi), std::move(jac), std::move(series));
}

Vector DifferentiableFunction::gradient_at(const Vector& point) const {
  if (gradient) return gradient(point);
  return central_gradient(value, point);
}

Vector infinitesimal_of(const GroupTransformation& transform, const Vector& point) {
  if (point.size() != transform.dimension) {
    throw ArgumentError("point dimension does not match transformation");
  }
  const double h = difference_step(point.norm());
  if (!(transform.eps_domain.lo <= -h && h <= transform.eps_domain.hi)) {
    throw DomainError("parameter domain too small for the difference stencil");
  }
  return (transform.map(point, h) - transform.map(point, -h)) / (2.0 * h);
}

double apply_generator(const LieVectorField& field, const ScalarField& F, const GradientMap& gradF,
                       const Vector& point) {
  const Vector grad = gradF ? gradF(point) : central_gradient(F, point);
  return field.xi(point).dot(grad);
}

double apply_generator(const LieVectorField& field, const ScalarField& F, const Vector& point) {
  return apply_generator(field, F, GradientMap{}, point);
}

LieSeriesResult lie_series(const LieVectorField& field, const Vector& point, double eps,
                           int max_order) {
  if (max_order < 1) throw ArgumentError("lie_series order must be at least 1");
  if (point.size() != field.dimension()) throw ArgumentError("point dimension does not match field");

  LieSeriesResult result;
  if (eps == 0.0) {
    result.value = point;
    return result;
  }

  const auto dim = static_cast<std::size_t>(field.dimension());
  const auto order = static_cast<std::size_t>(max_order);

  // coeffs[k][i] = (X^k x_i)(point) / k!
  std::vector<std::vector<double>> coeffs(order + 1, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) coeffs[0][i] = point[static_cast<Eigen::Index>(i)];

  // The flow x(t) of dx/dt = xi(x) has Taylor coefficients equal to the Lie
  // series terms; coefficient k+1 follows from the order-k part of xi(x(t)).
  for (std::size_t k = 0; k < order; ++k) {
    std::vector<Taylor> x;
    x.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<double> c(k + 1);
      for (std::size_t m = 0; m <= k; ++m) c[m] = coeffs[m][i];
      x.emplace_back(std::move(c));
    }
    const std::vector<Taylor> v = field.xi_series(x);
    for (std::size_t i = 0; i < dim; ++i) {
      const double vk = k <= v[i].order() ? v[i][k] : 0.0;
      coeffs[k + 1][i] = vk / static_cast<double>(k + 1);
    }
  }

  Vector value = Vector::Zero(field.dimension());
  for (std::size_t k = order + 1; k-- > 0;) {
    value *= eps;
    for (std::size_t i = 0; i < dim; ++i) value[static_cast<Eigen::Index>(i)] += coeffs[k][i];
  }
  double last = 0.0;
  for (std::size_t i = 0; i < dim; ++i) last += coeffs[order][i] * coeffs[order][i];
  last = std::sqrt(last) * std::pow(std::abs(eps), static_cast<double>(order));

  if (!value.allFinite() || !std::isfinite(last)) {
    throw NumericalError("Lie series diverged (non-finite partial sum)");
  }
  result.value = std::move(value);
  result.last_term = last;
  if (last > 1e-8 * result.value.norm()) {
    result.converged = false;
    std::ostringstream os;
    os << "Lie series not converged: last term " << last << " at order " << max_order;
    result.warning = os.str();
  }
  return result;
}

InvarianceReport check_invariant_function(const LieVectorField& field, const ScalarField& F,
                                          const GradientMap& gradF,
                                          const std::vector<Vector>& sample_points, double tol) {
  if (sample_points.empty()) throw ArgumentError("invariance check needs sample points");
  InvarianceReport report;
  for (const Vector& p : sample_points) {
    report.max_abs = std::max(report.max_abs, std::abs(apply_generator(field, F, gradF, p)));
  }
  report.pass = report.max_abs <= tol;
  return report;
}

CanonicalReport check_canonical(const LieVectorField& field, const CanonicalCoordinateSystem& coords,
                                const std::vector<Vector>& sample_points, double tol) {
  if (coords.dimension != field.dimension() ||
      coords.coordinates.size() != static_cast<std::size_t>(coords.dimension)) {
    throw ArgumentError("canonical coordinates do not match the field dimension");
  }
  if (sample_points.empty()) throw ArgumentError("canonical check needs sample points");

  CanonicalReport report;
  const std::size_t n = coords.coordinates.size();
  for (const Vector& p : sample_points) {
    const Vector xi = field.xi(p);
    for (std::size_t i = 0; i < n; ++i) {
      const double action = xi.dot(coords.coordinates[i].gradient_at(p));
      if (i + 1 < n) {
        report.max_invariant_defect = std::max(report.max_invariant_defect, std::abs(action));
      } else {
        report.max_translation_defect = std::max(report.max_translation_defect, std::abs(action - 1.0));
      }
    }
  }
  report.pass = report.max_invariant_defect <= tol && report.max_translation_defect <= tol;
  return report;
}

double group_law_defect(const GroupTransformation& transform, const std::vector<Vector>& points,
                        const std::vector<std::pair<double, double>>& params) {
  double worst = 0.0;
  for (const Vector& p : points) {
    for (const auto& [a, b] : params) {
      const Vector composed = transform.map(transform.map(p, a), b);
      worst = std::max(worst, (composed - transform.map(p, a + b)).norm());
    }
  }
  return worst;
}

double jacobian_consistency(const LieVectorField& field, const std::vector<Vector>& points) {
  double worst = 0.0;
  const LieVectorField::VectorMap xi = [&field](const Vector& p) { return field.xi(p); };
  for (const Vector& p : points) {
    const Matrix numeric = central_jacobian(xi, p);
    const Matrix supplied = field.jacobian(p);
    const double scale = std::max(1.0, supplied.norm());
    worst = std::max(worst, (numeric - supplied).norm() / scale);
  }
  return worst;
}

GroupTransformation rotation_group() {
  GroupTransformation g;
  g.dimension = 2;
  g.eps_domain = {-1e300, 1e300};
  g.map = [](const Vector& x, double eps) {
    Vector out(2);
    out << x[0] * std::cos(eps) - x[1] * std::sin(eps), x[0] * std::sin(eps) + x[1] * std::cos(eps);
    return out;
  };
  return g;
}

GroupTransformation translation_group(const Vector& direction) {
  GroupTransformation g;
  g.dimension = static_cast<int>(direction.size());
  g.eps_domain = {-1e300, 1e300};
  g.map = [direction](const Vector& x, double eps) -> Vector { return x + eps * direction; };
  return g;
}

GroupTransformation scaling_group(int dimension) {
  GroupTransformation g;
  g.dimension = dimension;
  g.eps_domain = {-700.0, 700.0};
  g.map = [](const Vector& x, double eps) -> Vector { return std::exp(eps) * x; };
  return g;
}

LieVectorField rotation_field() {
  return LieVectorField::from_generic(2, [](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    return std::vector<T>{-x[1], x[0]};
  });
}

LieVectorField scaling_field(int dimension) {
  return LieVectorField::from_generic(dimension, [](const auto& x) { return x; });
}

LieVectorField translation_field(const Vector& direction) {
  return LieVectorField::from_generic(static_cast<int>(direction.size()), [direction](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    std::vector<T> out;
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out.push_back(T{direction[static_cast<Eigen::Index>(i)]});
    return out;
  });
}

LieVectorField zero_field(int dimension) {
  return translation_field(Vector::Zero(dimension));
}

CanonicalCoordinateSystem polar_coordinates() {
  CanonicalCoordinateSystem coords;
  coords.dimension = 2;
  coords.coordinates.push_back(differentiable([](const auto& x) {
    using std::sqrt;
    return sqrt(x[0] * x[0] + x[1] * x[1]);
  }));
  coords.coordinates.push_back(differentiable([](const auto& x) {
    using std::atan;
    return atan(x[1] / x[0]);
  }));
  coords.inverse = [](const Vector& r) {
    Vector x(2);
    x << r[0] * std::cos(r[1]), r[0] * std::sin(r[1]);
    return x;
  };
  return coords;
}

}  // namespace lieprob
