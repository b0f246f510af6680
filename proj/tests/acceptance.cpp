// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// selected criterion fails. `--only N` runs a single criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Cholesky>

#include "lieprob/baseline_filter.hpp"
#include "lieprob/bayes_solver.hpp"
#include "lieprob/experiment/commands.hpp"
#include "lieprob/experiment/config.hpp"
#include "lieprob/experiment/problem.hpp"
#include "lieprob/lie_core.hpp"
#include "lieprob/symmetry_ode.hpp"
#include "lieprob/truncated_gaussian.hpp"
#include "support.hpp"

namespace {

using namespace lieprob;
namespace ex = lieprob::experiment;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct DefaultRun {
  ex::RunConfig config = ex::builtin_config(ex::kDefaultBuiltin);
  ex::Problem problem = ex::build_problem(config);
  ModelBuilder builder = ex::model_builder(config, problem.quadrature);
};

Outcome contraction() {
  const auto t0 = std::chrono::steady_clock::now();
  DefaultRun d;
  // Closed-form oracle, checked against adaptive integration first.
  double oracle_gap = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double x = 1.0 + (support::kE - 1.0) * i / 20.0;
    oracle_gap = std::max(oracle_gap, std::abs(support::reference_solution(x) - ex::integrate_solution(d.config.problem, x)));
  }
  const auto rows = contraction_report(d.problem.quadrature, d.builder, {4, 8, 16, 32}, support::reference_solution,
                                       d.config.sampler, d.config.seed);
  const double elapsed = seconds_since(t0);
  bool sd_ok = true;
  for (std::size_t i = 1; i < rows.size(); ++i) sd_ok = sd_ok && rows[i].mean_sd <= 1.05 * rows[i - 1].mean_sd;
  const bool rmse_ok = rows.back().rmse_of_mean < 0.5 * rows.front().rmse_of_mean;
  std::string detail = fmt("oracle gap %.1e; ", oracle_gap);
  for (const ContractionRow& r : rows) detail += fmt("n=%zu rmse=%.4g sd=%.3g; ", r.n, r.rmse_of_mean, r.mean_sd);
  detail += fmt("%.1fs", elapsed);
  return {oracle_gap <= 1e-10 && rmse_ok && sd_ok && elapsed < 60.0, detail};
}

Outcome envelope() {
  const auto t0 = std::chrono::steady_clock::now();
  DefaultRun d;
  const PipelineRun run =
      run_pipeline(d.problem.quadrature, d.builder, d.config.model.n_design, d.config.sampler, d.config.seed);
  const double elapsed = seconds_since(t0);
  double min_slack = INFINITY;
  std::size_t bad_curves = 0;
  for (const PathSample& s : run.ensemble.rs_samples) {
    min_slack = std::min(min_slack, min_inequality_slack(s.coefficients(), run.posterior.inequalities));
  }
  for (const XYCurve& c : run.ensemble.xy_curves) {
    bool increasing = !c.degenerate && c.x.size() >= 2;
    for (std::size_t k = 1; increasing && k < c.x.size(); ++k) increasing = c.x[k] > c.x[k - 1];
    if (!increasing) ++bad_curves;
  }
  const bool pass = min_slack >= -1e-10 && bad_curves == 0 &&
                    run.ensemble.xy_curves.size() == run.ensemble.rs_samples.size() && elapsed < 10.0;
  return {pass, fmt("%zu samples, min slack %.2e, non-monotone curves %zu, %.1fs", run.ensemble.rs_samples.size(),
                    min_slack, bad_curves, elapsed)};
}

Outcome information() {
  DefaultRun d;
  const PipelineRun run =
      run_pipeline(d.problem.quadrature, d.builder, d.config.model.n_design, d.config.sampler, d.config.seed);
  double worst = 0.0;
  for (const PathSample& s : run.ensemble.rs_samples) {
    for (const double r : run.design.r_points) {
      worst = std::max(worst, std::abs(s.slope(r) - d.problem.quadrature.G(r)));
    }
  }
  return {worst <= 1e-8 && !run.design.r_points.empty(),
          fmt("max |s'(r_i) - G(r_i)| = %.2e over %zu points", worst, run.design.size())};
}

Outcome lie_machinery() {
  Vector lo(2);
  Vector hi(2);
  lo << 0.5, -1.5;
  hi << 2.0, 1.5;
  const std::vector<Vector> rot_points = sample_box(lo, hi, 100, 0);
  double series_error = 0.0;
  for (const double eps : {0.1, 0.5, 1.0}) {
    for (const Vector& p : rot_points) {
      Vector rotated(2);
      rotated << p[0] * std::cos(eps) - p[1] * std::sin(eps), p[0] * std::sin(eps) + p[1] * std::cos(eps);
      series_error = std::max(series_error, (lie_series(rotation_field(), p, eps).value - rotated).cwiseAbs().maxCoeff());
    }
  }
  const CanonicalReport polar = check_canonical(rotation_field(), polar_coordinates(), rot_points, 1e-8);

  lo << 1.0, 0.05;
  hi << support::kE, 5.0;
  const std::vector<Vector> points = sample_box(lo, hi, 100, 0);
  const CanonicalReport ratio_log =
      check_canonical(scaling_field(2), homogeneous_chart(support::kE, 0.1).coordinate_system(), points, 1e-8);
  return {series_error <= 1e-8 && polar.pass && ratio_log.pass,
          fmt("series error %.2e, polar defect %.2e/%.2e, (y/x, log y) defect %.2e/%.2e", series_error,
              polar.max_invariant_defect, polar.max_translation_defect, ratio_log.max_invariant_defect,
              ratio_log.max_translation_defect)};
}

Outcome symmetry() {
  const GradientField f = support::reference_field();
  const SymmetryReport scaling = admits_symmetry(f, scaling_field(2), 100, 0);
  Vector dx(2);
  dx << 1.0, 0.0;
  const SymmetryReport shift = admits_symmetry(f, translation_field(dx), 100, 0);
  const CanonicalChart chart = homogeneous_chart(support::kE, 0.1);
  const QuadratureProblem q = reduce_to_quadrature(f, chart, 1.5);
  double g_error = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double r = 0.1 + 1.4 * i / 49.0;
    g_error = std::max(g_error, std::abs(q.G(r) - (r + 1.0 / r)));
  }
  const double spread = g_s_independence_spread(f, chart, Interval{0.1, 1.5});
  return {scaling.pass && scaling.max_abs <= 1e-6 && !shift.pass && g_error <= 1e-10 && spread <= 1e-8,
          fmt("scaling %.2e, x-translation %.2e, |G - (r + 1/r)| %.2e, spread %.2e", scaling.max_abs, shift.max_abs,
              g_error, spread)};
}

Outcome sampler() {
  constexpr std::size_t kDraws = 5000;
  bool pass = true;
  double worst = 0.0;
  for (int dim = 1; dim <= 3; ++dim) {
    const Eigen::VectorXd mean = Eigen::VectorXd::LinSpaced(dim, 0.3, -0.4);
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < i; ++j) a(i, j) = 0.5 / (1 + i + j);
    }
    const Eigen::MatrixXd cov = a * a.transpose();
    const Eigen::VectorXd blo = Eigen::VectorXd::Constant(dim, -0.5);
    const Eigen::VectorXd bhi = Eigen::VectorXd::LinSpaced(dim, 1.0, 2.0);
    std::vector<LinearConstraint> ineq;
    for (int i = 0; i < dim; ++i) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(dim);
      row[i] = 1.0;
      ineq.push_back({row, blo[i], "lower"});
      ineq.push_back({-row, -bhi[i], "upper"});
    }
    const auto gibbs = sample_truncated_gaussian(mean, cov, {}, ineq, kDraws, 500, 5, 17);

    const Eigen::MatrixXd L = cov.llt().matrixL();
    Rng rng(99);
    std::vector<Eigen::VectorXd> accepted;
    while (accepted.size() < kDraws) {
      Eigen::VectorXd z(dim);
      for (int i = 0; i < dim; ++i) z[i] = support::normal(rng);
      const Eigen::VectorXd x = mean + L * z;
      if ((x.array() >= blo.array()).all() && (x.array() <= bhi.array()).all()) accepted.push_back(x);
    }
    const auto moments = [dim](const std::vector<Eigen::VectorXd>& xs) {
      Eigen::VectorXd m = Eigen::VectorXd::Zero(dim);
      Eigen::VectorXd m2 = Eigen::VectorXd::Zero(dim);
      for (const auto& x : xs) {
        m += x;
        m2 += x.cwiseProduct(x);
      }
      m /= static_cast<double>(xs.size());
      m2 /= static_cast<double>(xs.size());
      return std::pair{m, (m2 - m.cwiseProduct(m)).eval()};
    };
    const auto [gm, gv] = moments(gibbs);
    const auto [rm, rv] = moments(accepted);
    for (int i = 0; i < dim; ++i) {
      const double se = std::sqrt((gv[i] + rv[i]) / kDraws);
      const double se_var = std::sqrt(2.0 * (gv[i] * gv[i] + rv[i] * rv[i]) / kDraws);
      const double z_mean = std::abs(gm[i] - rm[i]) / se;
      const double z_var = std::abs(gv[i] - rv[i]) / se_var;
      worst = std::max({worst, z_mean, z_var});
      pass = pass && z_mean <= 3.0 && z_var <= 3.0;
    }
  }

  Eigen::VectorXd one(1);
  one << 1.0;
  const auto half = sample_truncated_gaussian(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), {},
                                              {{one, 0.0, "x >= 0"}}, 2000, 100, 1, 0);
  double hm = 0.0;
  for (const auto& h : half) hm += h[0];
  hm /= static_cast<double>(half.size());
  const double half_gap = std::abs(hm - std::sqrt(2.0 / std::numbers::pi));
  return {pass && half_gap <= 0.05, fmt("worst moment gap %.2f SE, half-normal mean gap %.3f", worst, half_gap)};
}

Outcome baseline() {
  FilterConfig c;
  c.n = 8;
  const double dependent = ancillarity_sensitivity(support::reference_field(), c, 0.1);
  const GradientField independent = make_gradient_field(
      [](const auto& x, const auto& y) {
        using std::cos;
        return cos(3.0 * x) + 0.0 * y;
      },
      Interval{0, 2}, Interval{-2, 2}, 0.0, 0.5, FieldStructure::y_independent);
  const double flat = ancillarity_sensitivity(independent, c, 0.1);

  std::vector<double> gaps;
  for (const double sigma : {1e-1, 1e-2, 1e-3}) {
    FilterConfig fc;
    fc.n = 10;
    fc.sigma = sigma;
    fc.kernel = {1.0, 0.5};
    const FilterState s = run_filter(independent, fc);
    const GaussianDerivativeModel ref = noise_free_reference(independent, fc);
    double sup = 0.0;
    for (int i = 0; i <= 100; ++i) sup = std::max(sup, std::abs(s.belief.mean(0.02 * i) - ref.mean(0.02 * i)));
    gaps.push_back(sup);
  }
  const bool monotone = gaps[1] <= gaps[0] && gaps[2] <= gaps[1];
  return {dependent > 0.0 && flat == 0.0 && monotone,
          fmt("sensitivity %.3e (y-dependent), %.1e (y-independent); sigma gaps %.2e %.2e %.2e", dependent, flat,
              gaps[0], gaps[1], gaps[2])};
}

Outcome reproducibility() {
  const ex::RunConfig c = ex::builtin_config(ex::kDefaultBuiltin);
  const fs::path root = fs::temp_directory_path() / "lieprob_acceptance_repro";
  fs::remove_all(root);
  std::ostringstream err;
  if (ex::cmd_solve(c, root / "a", err) != ex::kExitOk || ex::cmd_solve(c, root / "b", err) != ex::kExitOk) {
    return {false, "solve failed: " + err.str()};
  }
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  std::size_t identical = 0;
  std::size_t bytes = 0;
  for (const char* name : {"samples_rs.csv", "samples_xy.csv", "mean_xy.csv"}) {
    const std::string a = slurp(root / "a" / name);
    if (!a.empty() && a == slurp(root / "b" / name)) ++identical;
    bytes += a.size();
  }
  fs::remove_all(root);
  return {identical == 3, fmt("%zu/3 CSV files identical (%zu bytes)", identical, bytes)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lieprob acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "Run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle contraction", contraction},      {"envelope and well-definedness", envelope},
      {"exact-information fidelity", information}, {"lie machinery", lie_machinery},
      {"symmetry criterion", symmetry},         {"constrained sampler oracle", sampler},
      {"baseline ancillarity witness", baseline}, {"reproducibility", reproducibility},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << " ("
              << o.detail << ")" << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
