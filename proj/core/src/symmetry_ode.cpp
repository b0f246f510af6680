#include "lieprob/symmetry_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "lieprob/numdiff.hpp"
#include "lieprob/random.hpp"

namespace lieprob {

namespace {

Vector plane_point(double x, double y) {
  Vector p(2);
  p << x, y;
  return p;
}

// Root of g on [lo, hi] by bisection; nullopt without a sign change.
template <class G>
std::optional<double> bisect(G g, double lo, double hi) {
  double glo = g(lo);
  const double ghi = g(hi);
  if (!std::isfinite(glo) || !std::isfinite(ghi)) return std::nullopt;
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gmid = g(mid);
    if (gmid == 0.0) return mid;
    if ((gmid > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Points on the level set r(x, y) = target. Slices of constant x are tried
// first; charts whose r does not vary with y fall back to slices of constant y.
std::vector<Vector> level_set_points(const CanonicalChart& chart, Interval xbox, Interval ybox,
                                     double target, std::size_t count) {
  std::vector<Vector> points;
  auto frac = [count](std::size_t k) {
    return (static_cast<double>(k) + 0.5) / static_cast<double>(count);
  };
  for (std::size_t k = 0; k < count; ++k) {
    const double x = xbox.lo + frac(k) * xbox.width();
    const auto y = bisect([&](double t) { return chart.r(x, t) - target; }, ybox.lo, ybox.hi);
    if (y) points.push_back(plane_point(x, *y));
  }
  if (!points.empty()) return points;
  for (std::size_t k = 0; k < count; ++k) {
    const double y = ybox.lo + frac(k) * ybox.width();
    const auto x = bisect([&](double t) { return chart.r(t, y) - target; }, xbox.lo, xbox.hi);
    if (x) points.push_back(plane_point(*x, y));
  }
  return points;
}

struct GEvaluation {
  double value;
  double denominator;
};

GEvaluation g_formula(const GradientField& gf, const CanonicalChart& chart, double x, double y) {
  const double slope = gf.f(x, y);
  const double num = chart.s_x(x, y) + chart.s_y(x, y) * slope;
  const double den = chart.r_x(x, y) + chart.r_y(x, y) * slope;
  return {num / den, den};
}

// Bounds in which the level-set search runs: the chart domain clipped to the
// field's box so that every representative is a legitimate evaluation point.
Interval search_box(const GradientField& gf, const CanonicalChart& chart) {
  Interval box{std::max(gf.y_domain.lo, chart.y_domain.lo), std::min(gf.y_domain.hi, chart.y_domain.hi)};
  if (!(box.lo < box.hi)) throw DomainError("field and chart y-domains do not overlap");
  return box;
}

[[noreturn]] void throw_singular(double r) {
  std::ostringstream os;
  os.precision(17);
  os << "transformed gradient G is singular at r = " << r;
  throw SingularityError(os.str(), r);
}

}  // namespace

double GradientField::dfdx(double x, double y) const {
  if (f_x) return f_x(x, y);
  return central_derivative([&](double t) { return f(t, y); }, x);
}

double GradientField::dfdy(double x, double y) const {
  if (f_y) return f_y(x, y);
  return central_derivative([&](double t) { return f(x, t); }, y);
}

CanonicalCoordinateSystem CanonicalChart::coordinate_system() const {
  CanonicalCoordinateSystem coords;
  coords.dimension = 2;
  auto wrap = [](PlaneFunction fn, PlaneFunction dx, PlaneFunction dy) {
    DifferentiableFunction d;
    d.value = [fn](const Vector& p) { return fn(p[0], p[1]); };
    if (dx && dy) {
      d.gradient = [dx, dy](const Vector& p) { return plane_point(dx(p[0], p[1]), dy(p[0], p[1])); };
    }
    return d;
  };
  coords.coordinates.push_back(wrap(r, r_x, r_y));
  coords.coordinates.push_back(wrap(s, s_x, s_y));
  if (x_inv && y_inv) {
    coords.inverse = [xi = x_inv, yi = y_inv](const Vector& rs) {
      return plane_point(xi(rs[0], rs[1]), yi(rs[0], rs[1]));
    };
  }
  return coords;
}

double QuadratureProblem::scale() const { return std::log(x_T); }

double extended_infinitesimal_1(const LieVectorField& field, double x, double y, double y1) {
  if (field.dimension() != 2) throw ArgumentError("extended infinitesimal needs a plane field");
  const Matrix J = field.jacobian(plane_point(x, y));
  if (J.rows() != 2 || J.cols() != 2 || !J.allFinite()) {
    throw ArgumentError("field partials unavailable at the requested point");
  }
  const double xi_x = J(0, 0);
  const double xi_y = J(0, 1);
  const double eta_x = J(1, 0);
  const double eta_y = J(1, 1);
  return eta_x + y1 * eta_y - y1 * (xi_x + y1 * xi_y);
}

SymmetryReport admits_symmetry(const GradientField& gf, const LieVectorField& field, std::size_t n_samples,
                               std::uint64_t seed, double tol) {
  if (field.dimension() != 2) throw ArgumentError("symmetry criterion needs a plane field");
  Vector lower(2);
  Vector upper(2);
  lower << gf.x_domain.lo, gf.y_domain.lo;
  upper << gf.x_domain.hi, gf.y_domain.hi;

  SymmetryReport report;
  for (const Vector& p : sample_box(lower, upper, n_samples, seed)) {
    const double x = p[0];
    const double y = p[1];
    const double y1 = gf.f(x, y);
    if (!std::isfinite(y1)) continue;
    const Vector xi = field.xi(p);
    const double eta1 = extended_infinitesimal_1(field, x, y, y1);
    // F(x, y, y1) = y1 - f(x, y), so X1 F = -xi f_x - eta f_y + eta1.
    const double action = -xi[0] * gf.dfdx(x, y) - xi[1] * gf.dfdy(x, y) + eta1;
    if (!std::isfinite(action)) continue;
    const double norm = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + eta1 * eta1);
    report.max_raw = std::max(report.max_raw, std::abs(action));
    report.max_abs = std::max(report.max_abs, std::abs(action) / (1.0 + norm));
    ++report.points;
  }
  if (report.points == 0) throw DomainError("no sampled point lies in the domain of f");
  report.pass = report.max_abs <= tol;
  return report;
}

double g_s_independence_spread(const GradientField& gf, const CanonicalChart& chart, Interval r_domain,
                               std::size_t r_count, std::size_t representatives, std::uint64_t seed) {
  const Interval ybox = search_box(gf, chart);
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < r_count; ++i) {
    const double r = rng.uniform(r_domain.lo, r_domain.hi);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Vector& p : level_set_points(chart, gf.x_domain, ybox, r, representatives)) {
      const GEvaluation g = g_formula(gf, chart, p[0], p[1]);
      if (std::abs(g.denominator) < kSingularDenominator || !std::isfinite(g.value)) continue;
      lo = std::min(lo, g.value);
      hi = std::max(hi, g.value);
    }
    if (hi >= lo) worst = std::max(worst, hi - lo);
  }
  return worst;
}

QuadratureProblem reduce_to_quadrature(const GradientField& gf, const CanonicalChart& chart, double r_max) {
  if (!chart.r || !chart.s || !chart.r_x || !chart.r_y || !chart.s_x || !chart.s_y) {
    throw ArgumentError("chart partials are required for the reduction");
  }
  QuadratureProblem problem;
  problem.r0 = chart.r(gf.x0, gf.y0);
  problem.s0 = chart.s(gf.x0, gf.y0);
  if (!(r_max > problem.r0)) throw ArgumentError("r_max must exceed r0 = r(x0, y0)");
  problem.r_domain = {problem.r0, r_max};
  problem.chart = std::make_shared<const CanonicalChart>(chart);
  problem.x_T = gf.x_domain.hi;

  if (chart.kind == CanonicalChart::Kind::homogeneous && gf.structure == FieldStructure::homogeneous && gf.F) {
    problem.G = [F = gf.F](double r) {
      const double Fr = F(r);
      const double den = -r * r + r * Fr;
      if (!(std::abs(den) >= kSingularDenominator)) throw_singular(r);
      return Fr / den;
    };
  } else {
    const Interval ybox = search_box(gf, chart);
    // One slice through the middle of the box. The value must not depend on
    // the representative; that is asserted below.
    problem.G = [gf, chart, ybox](double r) {
      const auto points = level_set_points(chart, gf.x_domain, ybox, r, 1);
      if (points.empty()) {
        std::ostringstream os;
        os << "no representative point with r(x, y) = " << r << " in the domain box";
        throw DomainError(os.str());
      }
      const GEvaluation g = g_formula(gf, chart, points[0][0], points[0][1]);
      if (!(std::abs(g.denominator) >= kSingularDenominator)) throw_singular(r);
      return g.value;
    };
    const double spread = g_s_independence_spread(gf, chart, problem.r_domain);
    if (spread > 1e-8) {
      std::ostringstream os;
      os << "transformed gradient depends on s (spread " << spread << "); generator is not a symmetry";
      throw NotASymmetryError(os.str());
    }
  }

  if (chart.kind == CanonicalChart::Kind::homogeneous) {
    problem.envelope = implicit_prior_envelope(chart, problem.x_T);
  }
  return problem;
}

CanonicalChart homogeneous_chart(double x_T, double y0) {
  if (!(y0 > 0.0)) throw ArgumentError("homogeneous chart requires y0 > 0");
  if (!(x_T > 1.0)) throw ArgumentError("homogeneous chart requires x_T > 1");
  CanonicalChart c;
  c.kind = CanonicalChart::Kind::homogeneous;
  c.r = [](double x, double y) { return y / x; };
  c.s = [](double, double y) { return std::log(y); };
  c.x_inv = [](double r, double s) { return std::exp(s) / r; };
  c.y_inv = [](double, double s) { return std::exp(s); };
  c.r_x = [](double x, double y) { return -y / (x * x); };
  c.r_y = [](double x, double) { return 1.0 / x; };
  c.s_x = [](double, double) { return 0.0; };
  c.s_y = [](double, double y) { return 1.0 / y; };
  c.x_domain = {1.0, x_T};
  c.y_domain = {0.0, std::numeric_limits<double>::infinity()};
  c.image = "(0, inf) x R";
  c.x_T = x_T;
  return c;
}

CanonicalChart translation_chart(Interval x_domain, Interval y_domain) {
  CanonicalChart c;
  c.kind = CanonicalChart::Kind::custom;
  c.r = [](double x, double) { return x; };
  c.s = [](double, double y) { return y; };
  c.x_inv = [](double r, double) { return r; };
  c.y_inv = [](double, double s) { return s; };
  c.r_x = [](double, double) { return 1.0; };
  c.r_y = [](double, double) { return 0.0; };
  c.s_x = [](double, double) { return 0.0; };
  c.s_y = [](double, double) { return 1.0; };
  c.x_domain = x_domain;
  c.y_domain = y_domain;
  c.image = "identity";
  return c;
}

Envelope implicit_prior_envelope(const CanonicalChart& chart, double x_T) {
  if (chart.kind != CanonicalChart::Kind::homogeneous) {
    throw NotImplementedError("implicit-prior envelope is only known for the homogeneous chart");
  }
  if (!(x_T > 1.0)) throw ArgumentError("envelope requires x_T > 1");
  const double width = std::log(x_T);
  Envelope env;
  env.lower = [](double r) { return std::log(r); };
  env.upper = [width](double r) { return std::log(r) + width; };
  return env;
}

double chart_round_trip_error(const CanonicalChart& chart, const std::vector<Vector>& points) {
  double worst = 0.0;
  for (const Vector& p : points) {
    const double r = chart.r(p[0], p[1]);
    const double s = chart.s(p[0], p[1]);
    worst = std::max(worst, std::abs(chart.x_inv(r, s) - p[0]));
    worst = std::max(worst, std::abs(chart.y_inv(r, s) - p[1]));
  }
  return worst;
}

double chart_partials_error(const CanonicalChart& chart, const std::vector<Vector>& points) {
  double worst = 0.0;
  auto rel = [](double supplied, double numeric) {
    return std::abs(supplied - numeric) / std::max(1.0, std::abs(supplied));
  };
  for (const Vector& p : points) {
    const double x = p[0];
    const double y = p[1];
    worst = std::max(worst, rel(chart.r_x(x, y), central_derivative([&](double t) { return chart.r(t, y); }, x)));
    worst = std::max(worst, rel(chart.r_y(x, y), central_derivative([&](double t) { return chart.r(x, t); }, y)));
    worst = std::max(worst, rel(chart.s_x(x, y), central_derivative([&](double t) { return chart.s(t, y); }, x)));
    worst = std::max(worst, rel(chart.s_y(x, y), central_derivative([&](double t) { return chart.s(x, t); }, y)));
  }
  return worst;
}

}  // namespace lieprob
