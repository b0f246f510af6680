#pragma once

// First-order ODEs dy/dx = f(x, y), the symmetry criterion for a candidate
// generator, and the reduction ds/dr = G(r) in canonical coordinates.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lieprob/lie_core.hpp"

namespace lieprob {

using PlaneFunction = std::function<double(double, double)>;
using RealFunction = std::function<double(double)>;

enum class FieldStructure {
  generic,
  /// f(x, y) = F(y / x)
  homogeneous,
  /// f(x, y) = g(x)
  y_independent,
};

/// Right-hand side f of dy/dx = f(x, y) on a domain box, with the initial
/// condition y(x0) = y0.
struct GradientField {
  PlaneFunction f;
  /// Optional partials; central differences are used when absent.
  PlaneFunction f_x;
  PlaneFunction f_y;
  Interval x_domain;
  Interval y_domain;
  double x0 = 0.0;
  double y0 = 0.0;
  FieldStructure structure = FieldStructure::generic;
  /// Profile F(u) when structure == homogeneous.
  RealFunction F;

  [[nodiscard]] double operator()(double x, double y) const { return f(x, y); }
  [[nodiscard]] double dfdx(double x, double y) const;
  [[nodiscard]] double dfdy(double x, double y) const;
  [[nodiscard]] bool depends_on_y() const noexcept { return structure != FieldStructure::y_independent; }
};

/// GradientField from `f(const T& x, const T& y) -> T`, partials by
/// forward-mode differentiation.
template <class Fn>
GradientField make_gradient_field(Fn f, Interval x_domain, Interval y_domain, double x0, double y0,
                                  FieldStructure structure = FieldStructure::generic);

/// dy/dx = F(y/x) on [1, x_T] with y(1) = y0. `F` must accept double and Taylor.
template <class Fn>
GradientField homogeneous_field(Fn F, double x_T, double y0, Interval y_domain);

/// Canonical coordinates (r, s) for a plane generator together with their
/// inverse and first partials.
struct CanonicalChart {
  enum class Kind { homogeneous, custom };

  Kind kind = Kind::custom;
  PlaneFunction r;
  PlaneFunction s;
  PlaneFunction x_inv;  ///< x(r, s)
  PlaneFunction y_inv;  ///< y(r, s)
  PlaneFunction r_x;
  PlaneFunction r_y;
  PlaneFunction s_x;
  PlaneFunction s_y;
  Interval x_domain;
  Interval y_domain;
  std::string image;
  /// Right end of the x-domain; only meaningful for the homogeneous chart.
  double x_T = 0.0;

  /// (r, s) as a CanonicalCoordinateSystem for check_canonical.
  [[nodiscard]] CanonicalCoordinateSystem coordinate_system() const;
};

struct Envelope {
  RealFunction lower;
  RealFunction upper;
};

/// ds/dr = G(r) on [r0, r_max] with s(r0) = s0.
struct QuadratureProblem {
  RealFunction G;
  Interval r_domain;
  double r0 = 0.0;
  double s0 = 0.0;
  /// Empty when the chart has no known implicit-prior envelope.
  Envelope envelope;
  std::shared_ptr<const CanonicalChart> chart;
  double x_T = 0.0;

  [[nodiscard]] bool has_envelope() const noexcept { return static_cast<bool>(envelope.lower); }
  /// log(x_T), the amplitude of the normalized path.
  [[nodiscard]] double scale() const;
};

struct SymmetryReport {
  /// max |X1 F| / (1 + |(xi, eta, eta1)|) over the sampled surface points.
  double max_abs = 0.0;
  /// Same maximum without normalization.
  double max_raw = 0.0;
  std::size_t points = 0;
  bool pass = false;
};

inline constexpr double kSymmetryTolerance = 1e-6;
inline constexpr double kSingularDenominator = 1e-12;

/// eta1 = D_x eta - y1 D_x xi with D_x = d/dx + y1 d/dy.
///
/// Higher prolongations follow eta(m) = D_x eta(m-1) - y_m D_x xi; only the
/// first is needed for first-order ODEs.
[[nodiscard]] double extended_infinitesimal_1(const LieVectorField& field, double x, double y, double y1);

/// Infinitesimal criterion on the surface y1 = f(x, y), sampled uniformly in
/// the domain box.
[[nodiscard]] SymmetryReport admits_symmetry(const GradientField& gradient_field,
                                             const LieVectorField& field, std::size_t n_samples = 100,
                                             std::uint64_t seed = 0, double tol = kSymmetryTolerance);

/// G(r) = (s_x + s_y f) / (r_x + r_y f) evaluated on the level set r(x, y) = r.
[[nodiscard]] QuadratureProblem reduce_to_quadrature(const GradientField& gradient_field,
                                                     const CanonicalChart& chart, double r_max);

/// s = log y, r = y / x on [1, x_T] x (0, inf); image (0, inf) x R.
[[nodiscard]] CanonicalChart homogeneous_chart(double x_T, double y0);

/// r = x, s = y: the chart for dy/dx = g(x), whose generator is d/dy.
[[nodiscard]] CanonicalChart translation_chart(Interval x_domain, Interval y_domain);

/// log r <= s(r) <= log r + log x_T; homogeneous chart only.
[[nodiscard]] Envelope implicit_prior_envelope(const CanonicalChart& chart, double x_T);

/// Max over `r_count` seeded r values of the spread of the G formula across
/// `representatives` points on each level set r(x, y) = r. Zero when the
/// generator is a symmetry.
[[nodiscard]] double g_s_independence_spread(const GradientField& gradient_field,
                                             const CanonicalChart& chart, Interval r_domain,
                                             std::size_t r_count = 20, std::size_t representatives = 5,
                                             std::uint64_t seed = 0);

/// max |(x_inv(r, s), y_inv(r, s)) - (x, y)| over the points.
[[nodiscard]] double chart_round_trip_error(const CanonicalChart& chart,
                                            const std::vector<Vector>& points);

/// max relative deviation of the chart partials from central differences.
[[nodiscard]] double chart_partials_error(const CanonicalChart& chart, const std::vector<Vector>& points);

// ---------------------------------------------------------------------------

template <class Fn>
GradientField make_gradient_field(Fn f, Interval x_domain, Interval y_domain, double x0, double y0,
                                  FieldStructure structure) {
  if (!(x_domain.lo < x_domain.hi)) throw ArgumentError("gradient field needs x0 < x_T");
  GradientField g;
  g.f = [f](double x, double y) { return static_cast<double>(f(x, y)); };
  g.f_x = [f](double x, double y) {
    const Taylor t = f(Taylor::variable(x, 1), Taylor(y, 1));
    return t.order() >= 1 ? t[1] : 0.0;
  };
  g.f_y = [f](double x, double y) {
    const Taylor t = f(Taylor(x, 1), Taylor::variable(y, 1));
    return t.order() >= 1 ? t[1] : 0.0;
  };
  g.x_domain = x_domain;
  g.y_domain = y_domain;
  g.x0 = x0;
  g.y0 = y0;
  g.structure = structure;
  return g;
}

template <class Fn>
GradientField homogeneous_field(Fn F, double x_T, double y0, Interval y_domain) {
  GradientField g = make_gradient_field([F](const auto& x, const auto& y) { return F(y / x); },
                                        Interval{1.0, x_T}, y_domain, 1.0, y0,
                                        FieldStructure::homogeneous);
  g.F = [F](double u) { return static_cast<double>(F(u)); };
  return g;
}

}  // namespace lieprob
