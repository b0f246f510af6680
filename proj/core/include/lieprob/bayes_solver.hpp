#pragma once

// Exact Bayesian solver for ds/dr = G(r): gradient evaluations enter as
// noise-free slope constraints on the hat-basis path model, posterior paths
// are drawn from the truncated Gaussian and mapped back to (x, y).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lieprob/constrained_prior.hpp"

namespace lieprob {

struct DesignSet {
  /// Strictly increasing, inside (r0, r_max].
  std::vector<double> r_points;
  std::string rule = "regular grid";

  [[nodiscard]] std::size_t size() const noexcept { return r_points.size(); }
};

/// Evaluations of G. Non-empty designs carry G(r0) first, then one value per
/// design point; an empty design carries no evaluations at all.
struct InformationVector {
  std::vector<double> r;
  std::vector<double> values;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

struct XYCurve {
  /// Pushed-back points with tied x removed; x strictly increasing.
  std::vector<double> x;
  std::vector<double> y;
  std::size_t ties_removed = 0;
  /// Fewer than two distinct x values.
  bool degenerate = false;
  /// The curve spans the whole x-grid.
  bool covers_grid = false;
};

struct EnsembleDiagnostics {
  std::size_t design_size = 0;
  std::uint64_t seed = 0;
  std::size_t degenerate = 0;
  /// Common x-range covered by every non-degenerate curve.
  Interval covered;
};

struct PosteriorEnsemble {
  std::vector<PathSample> rs_samples;
  std::vector<XYCurve> xy_curves;
  std::vector<double> x_grid;
  /// y of each sample on x_grid (rows = samples); NaN where not covered.
  Eigen::MatrixXd y_on_grid;
  EnsembleDiagnostics diagnostics;
};

struct PosteriorSummary {
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> sd;
  std::vector<double> lower95;
  std::vector<double> upper95;
};

struct ContractionRow {
  std::size_t n = 0;
  double rmse_of_mean = 0.0;
  double mean_sd = 0.0;
};

using ModelBuilder = std::function<ConstrainedPathModel(std::size_t n_design)>;

inline constexpr std::size_t kKnotsPerDesignPoint = 4;
inline constexpr std::size_t kDefaultGridSize = 101;

/// Cell centres of a regular n-point grid on (r0, r_max], each moved to the
/// midpoint of the knot interval that contains it.
[[nodiscard]] DesignSet regular_design(const ConstrainedPathModel& model, std::size_t n);

[[nodiscard]] InformationVector information_operator(const QuadratureProblem& problem, const DesignSet& design);

/// zeta-slope implied by s'(r) = G: (G - 1/r) / log(x_T).
[[nodiscard]] double implied_zeta_slope(double r, double g, double scale);

/// Appends one exact slope equality per evaluation. G(r0) constrains the
/// first knot interval (right derivative at r0); each design point constrains
/// the interval that contains it.
[[nodiscard]] ConstrainedPathModel condition(const ConstrainedPathModel& model, const DesignSet& design,
                                             const InformationVector& info);

[[nodiscard]] std::vector<PathSample> sample_posterior(const ConstrainedPathModel& model,
                                                       const SamplerParams& params, std::uint64_t seed);

/// Common grid: `count` points from x(r0) to the smallest x reached by any
/// non-degenerate sample.
[[nodiscard]] std::vector<double> default_x_grid(const std::vector<PathSample>& samples,
                                                 const CanonicalChart& chart,
                                                 std::size_t count = kDefaultGridSize);

[[nodiscard]] PosteriorEnsemble push_back(const std::vector<PathSample>& samples, const CanonicalChart& chart,
                                          const std::vector<double>& x_grid);

/// Pointwise mean, standard deviation and central 95% band over the samples.
[[nodiscard]] PosteriorSummary summarize(const PosteriorEnsemble& ensemble);

struct PipelineRun {
  ConstrainedPathModel posterior;
  DesignSet design;
  InformationVector info;
  PosteriorEnsemble ensemble;
  PosteriorSummary summary;
};

/// Design, evaluate, condition, sample and push back for one design size.
[[nodiscard]] PipelineRun run_pipeline(const QuadratureProblem& problem, const ModelBuilder& builder,
                                       std::size_t n_design, const SamplerParams& params, std::uint64_t seed);

[[nodiscard]] std::vector<ContractionRow> contraction_report(const QuadratureProblem& problem,
                                                             const ModelBuilder& builder,
                                                             const std::vector<std::size_t>& design_sizes,
                                                             const std::function<double(double)>& oracle,
                                                             const SamplerParams& params, std::uint64_t seed);

}  // namespace lieprob
