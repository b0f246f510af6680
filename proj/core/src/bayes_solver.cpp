#include "lieprob/bayes_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lieprob/errors.hpp"

namespace lieprob {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string describe(double r) {
  std::ostringstream os;
  os.precision(17);
  os << r;
  return os.str();
}

LinearConstraint slope_equality(const ConstrainedPathModel& model, Eigen::Index j, double zeta_slope,
                                double r) {
  const double width = model.knots[j + 1] - model.knots[j];
  Eigen::VectorXd row = Eigen::VectorXd::Zero(model.size());
  row[j] = -1.0 / width;
  row[j + 1] = 1.0 / width;
  return {std::move(row), zeta_slope, "data slope at r = " + describe(r)};
}

// Linear-interpolation quantile of sorted data (Hyndman-Fan type 7).
double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return kNaN;
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

XYCurve push_one(const PathSample& sample, const CanonicalChart& chart) {
  const Eigen::VectorXd& k = sample.knots();
  XYCurve curve;
  const Eigen::Index intervals = k.size() - 1;
  constexpr int kSub = 10;
  for (Eigen::Index j = 0; j < intervals; ++j) {
    for (int m = 0; m < kSub || (j + 1 == intervals && m == kSub); ++m) {
      const double r = k[j] + (k[j + 1] - k[j]) * static_cast<double>(m) / kSub;
      const double s = sample.s(r);
      const double x = chart.x_inv(r, s);
      const double y = chart.y_inv(r, s);
      if (!std::isfinite(x) || !std::isfinite(y)) throw NumericalError("push-back produced a non-finite point");
      if (!curve.x.empty()) {
        const double last = curve.x.back();
        const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
        if (x < last - 1e3 * tol) {
          throw InvariantViolation("pushed-back path has decreasing x at r = " + describe(r));
        }
        if (x <= last + tol) {
          ++curve.ties_removed;
          continue;
        }
      }
      curve.x.push_back(x);
      curve.y.push_back(y);
    }
  }
  curve.degenerate = curve.x.size() < 2;
  return curve;
}

}  // namespace

DesignSet regular_design(const ConstrainedPathModel& model, std::size_t n) {
  DesignSet design;
  const double lo = model.knots[0];
  const double hi = model.knots[model.size() - 1];
  for (std::size_t i = 0; i < n; ++i) {
    const double cell = lo + (static_cast<double>(i) + 0.5) * (hi - lo) / static_cast<double>(n);
    const Eigen::Index j = model.interval_of(cell);
    design.r_points.push_back(0.5 * (model.knots[j] + model.knots[j + 1]));
  }
  return design;
}

InformationVector information_operator(const QuadratureProblem& problem, const DesignSet& design) {
  InformationVector info;
  if (design.r_points.empty()) return info;
  info.r.push_back(problem.r0);
  for (const double r : design.r_points) {
    if (!(r > problem.r_domain.lo && r <= problem.r_domain.hi)) {
      throw DomainError("design point outside (r0, r_max]: " + describe(r));
    }
    info.r.push_back(r);
  }
  for (const double r : info.r) {
    double g = kNaN;
    try {
      g = problem.G(r);
    } catch (const SingularityError&) {
      throw;
    } catch (const std::exception& e) {
      throw NumericalError("evaluation of G failed at r = " + describe(r) + ": " + e.what());
    }
    if (!std::isfinite(g)) throw SingularityError("G is not finite at r = " + describe(r), r);
    info.values.push_back(g);
  }
  return info;
}

double implied_zeta_slope(double r, double g, double scale) { return (g - 1.0 / r) / scale; }

ConstrainedPathModel condition(const ConstrainedPathModel& model, const DesignSet& design,
                               const InformationVector& info) {
  if (design.r_points.empty()) {
    if (info.size() != 0) throw ArgumentError("information given without design points");
    return model;
  }
  if (info.size() != design.size() + 1 || info.r.size() != info.values.size()) {
    throw ArgumentError("information vector does not match the design");
  }

  ConstrainedPathModel out = model;
  std::vector<Eigen::Index> used;
  for (std::size_t i = 0; i < info.size(); ++i) {
    const double r = info.r[i];
    Eigen::Index j = 0;
    if (i > 0) {
      j = model.interval_of(r);
      const double tol = 1e-12 * std::max(1.0, std::abs(r));
      if (std::abs(r - model.knots[j]) <= tol || std::abs(r - model.knots[j + 1]) <= tol) {
        throw DesignError("design point lies on a knot: r = " + describe(r));
      }
    }
    if (std::find(used.begin(), used.end(), j) != used.end()) {
      throw DesignError("two evaluations fall in knot interval " + std::to_string(j) + " (r = " + describe(r) + ")");
    }
    used.push_back(j);

    double slope = implied_zeta_slope(r, info.values[i], model.scale);
    if (slope < -1e-8) {
      throw InconsistentDataError("data violate implicit-prior envelope: zeta slope " + describe(slope) +
                                  " at r = " + describe(r));
    }
    slope = std::max(slope, 0.0);
    out.equalities.push_back(slope_equality(model, j, slope, r));
  }
  return out;
}

std::vector<PathSample> sample_posterior(const ConstrainedPathModel& model, const SamplerParams& params,
                                         std::uint64_t seed) {
  return sample_prior(model, params, seed);
}

std::vector<double> default_x_grid(const std::vector<PathSample>& samples, const CanonicalChart& chart,
                                   std::size_t count) {
  if (samples.empty()) throw ArgumentError("no samples to build an x-grid from");
  if (count < 2) throw ArgumentError("x-grid needs at least two points");
  const double r0 = samples.front().knots()[0];
  const double x0 = chart.x_inv(r0, samples.front().s(r0));
  double x_hi = std::numeric_limits<double>::infinity();
  for (const PathSample& sample : samples) {
    const XYCurve curve = push_one(sample, chart);
    if (curve.degenerate) continue;
    x_hi = std::min(x_hi, curve.x.back());
  }
  if (!std::isfinite(x_hi)) throw DomainError("every sample is degenerate; no common x-range");
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = x0 + (x_hi - x0) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  grid.back() = x_hi;
  return grid;
}

PosteriorEnsemble push_back(const std::vector<PathSample>& samples, const CanonicalChart& chart,
                            const std::vector<double>& x_grid) {
  PosteriorEnsemble ens;
  ens.rs_samples = samples;
  ens.x_grid = x_grid;
  ens.y_on_grid = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(samples.size()),
                                            static_cast<Eigen::Index>(x_grid.size()), kNaN);
  double covered_lo = -std::numeric_limits<double>::infinity();
  double covered_hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    XYCurve curve = push_one(samples[i], chart);
    if (curve.degenerate) {
      ++ens.diagnostics.degenerate;
      ens.xy_curves.push_back(std::move(curve));
      continue;
    }
    covered_lo = std::max(covered_lo, curve.x.front());
    covered_hi = std::min(covered_hi, curve.x.back());
    bool covers = true;
    std::size_t seg = 0;
    for (std::size_t g = 0; g < x_grid.size(); ++g) {
      const double xg = x_grid[g];
      // Grid ends may differ from curve ends by rounding in the chart map.
      const double tol = 1e-12 * std::max(1.0, std::abs(xg));
      if (xg < curve.x.front() - tol || xg > curve.x.back() + tol) {
        covers = false;
        continue;
      }
      const double xc = std::clamp(xg, curve.x.front(), curve.x.back());
      while (seg + 2 < curve.x.size() && curve.x[seg + 1] < xc) ++seg;
      const double t = (xc - curve.x[seg]) / (curve.x[seg + 1] - curve.x[seg]);
      ens.y_on_grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(g)) =
          curve.y[seg] + t * (curve.y[seg + 1] - curve.y[seg]);
    }
    curve.covers_grid = covers;
    ens.xy_curves.push_back(std::move(curve));
  }
  ens.diagnostics.covered = {covered_lo, covered_hi};
  return ens;
}

PosteriorSummary summarize(const PosteriorEnsemble& ens) {
  PosteriorSummary out;
  out.x = ens.x_grid;
  std::vector<double> column;
  for (Eigen::Index g = 0; g < ens.y_on_grid.cols(); ++g) {
    column.clear();
    for (Eigen::Index i = 0; i < ens.y_on_grid.rows(); ++i) {
      const double v = ens.y_on_grid(i, g);
      if (std::isfinite(v)) column.push_back(v);
    }
    if (column.empty()) {
      out.mean.push_back(kNaN);
      out.sd.push_back(kNaN);
      out.lower95.push_back(kNaN);
      out.upper95.push_back(kNaN);
      continue;
    }
    double mean = 0.0;
    for (const double v : column) mean += v;
    mean /= static_cast<double>(column.size());
    double var = 0.0;
    for (const double v : column) var += (v - mean) * (v - mean);
    var = column.size() > 1 ? var / static_cast<double>(column.size() - 1) : 0.0;
    std::sort(column.begin(), column.end());
    out.mean.push_back(mean);
    out.sd.push_back(std::sqrt(var));
    out.lower95.push_back(quantile(column, 0.025));
    out.upper95.push_back(quantile(column, 0.975));
  }
  return out;
}

PipelineRun run_pipeline(const QuadratureProblem& problem, const ModelBuilder& builder, std::size_t n_design,
                         const SamplerParams& params, std::uint64_t seed) {
  if (!problem.chart) throw ArgumentError("quadrature problem has no chart");
  const ConstrainedPathModel prior = builder(n_design);
  PipelineRun run;
  run.design = regular_design(prior, n_design);
  run.info = information_operator(problem, run.design);
  run.posterior = condition(prior, run.design, run.info);
  const std::vector<PathSample> samples = sample_posterior(run.posterior, params, seed);
  run.ensemble = push_back(samples, *problem.chart, default_x_grid(samples, *problem.chart));
  run.ensemble.diagnostics.design_size = n_design;
  run.ensemble.diagnostics.seed = seed;
  run.summary = summarize(run.ensemble);
  return run;
}

std::vector<ContractionRow> contraction_report(const QuadratureProblem& problem, const ModelBuilder& builder,
                                               const std::vector<std::size_t>& design_sizes,
                                               const std::function<double(double)>& oracle,
                                               const SamplerParams& params, std::uint64_t seed) {
  if (design_sizes.empty()) throw ArgumentError("contraction report needs at least one design size");
  std::vector<ContractionRow> rows;
  for (const std::size_t n : design_sizes) {
    const PipelineRun run = run_pipeline(problem, builder, n, params, seed);
    double sq = 0.0;
    double sd = 0.0;
    std::size_t count = 0;
    for (std::size_t g = 0; g < run.summary.x.size(); ++g) {
      if (!std::isfinite(run.summary.mean[g])) continue;
      const double err = run.summary.mean[g] - oracle(run.summary.x[g]);
      sq += err * err;
      sd += run.summary.sd[g];
      ++count;
    }
    if (count == 0) throw NumericalError("posterior mean undefined on the whole grid");
    rows.push_back({n, std::sqrt(sq / static_cast<double>(count)), sd / static_cast<double>(count)});
  }
  return rows;
}

}  // namespace lieprob
