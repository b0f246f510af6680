#include "lieprob/experiment/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lieprob/baseline_filter.hpp"
#include "lieprob/bayes_solver.hpp"
#include "lieprob/errors.hpp"
#include "lieprob/experiment/artifacts.hpp"
#include "lieprob/experiment/problem.hpp"
#include "lieprob/random.hpp"

namespace lieprob::experiment {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kRoundTripTolerance = 1e-10;
constexpr double kSpreadTolerance = 1e-8;
constexpr double kRotationTolerance = 1e-8;
// Relative slack on the non-increasing mean_sd check.
constexpr double kSdSlack = 0.05;

// JSON has no NaN or infinity.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json config_json(const RunConfig& c) {
  return {
      {"problem",
       {{"builtin", c.problem.builtin},
        {"F", c.problem.F.str()},
        {"x_T", c.problem.x_T},
        {"y0", c.problem.y0},
        {"r_max", c.problem.r_max},
        {"y_min", c.problem.y_min},
        {"y_max", c.problem.y_max}}},
      {"model",
       {{"n_design", c.model.n_design},
        {"n_knots", c.model.n_knots},
        {"kernel_variance", c.model.kernel_variance},
        {"lengthscale_factor", c.model.lengthscale_factor},
        {"jitter", c.model.jitter}}},
      {"sampler", {{"n_samples", c.sampler.n_samples}, {"burn_in", c.sampler.burn_in}, {"thin", c.sampler.thin}}},
      {"run", {{"seed", c.seed}, {"out", c.out}}},
      {"baseline",
       {{"n", c.baseline.n},
        {"sigma", c.baseline.sigma},
        {"kernel_variance", c.baseline.kernel_variance},
        {"kernel_lengthscale", c.baseline.kernel_lengthscale},
        {"delta", c.baseline.delta}}},
      {"verify", {{"field", c.verify.field}, {"points", c.verify.points}, {"seed", c.verify.seed}}},
  };
}

json manifest_head(const std::string& command, const RunConfig& config, const std::string& started) {
  return {{"command", command},
          {"config", config_json(config)},
          {"input_hash", git_blob_sha1(serialize_config(config))},
          {"started_at", started}};
}

void finish(ArtifactDir& dir, json manifest, json summary) {
  manifest["finished_at"] = utc_timestamp();
  manifest["summary"] = std::move(summary);
  dir.write_manifest(std::move(manifest));
}

bool non_increasing(const std::vector<ContractionRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].mean_sd > (1.0 + kSdSlack) * rows[i - 1].mean_sd) return false;
  }
  return true;
}

}  // namespace

int run_guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ArgumentError& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NotASymmetryError& e) {
    err << "not a symmetry: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NotImplementedError& e) {
    err << "not implemented: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "output error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

std::vector<std::size_t> parse_design_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    token = first == std::string::npos ? "" : token.substr(first, last - first + 1);
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("design size '" + token + "' is not a non-negative integer");
    }
    try {
      sizes.push_back(static_cast<std::size_t>(std::stoull(token)));
    } catch (const std::out_of_range&) {
      throw ConfigError("design size '" + token + "' is out of range");
    }
  }
  if (sizes.empty()) throw ConfigError("empty design size list");
  if (static_cast<std::size_t>(std::count(text.begin(), text.end(), ',')) != sizes.size() - 1) {
    throw ConfigError("design size list '" + text + "' has an empty entry");
  }
  return sizes;
}

fs::path default_output_dir(const RunConfig& config, const std::string& command) {
  if (!config.out.empty()) return config.out;
  if (const char* root = std::getenv("LIEPROB_OUT_ROOT"); root && *root) return fs::path(root) / command;
  return fs::path("lieprob_out") / command;
}

int cmd_solve(const RunConfig& config, const fs::path& out, std::ostream& err) {
  return run_guarded(
      [&] {
        const std::string started = utc_timestamp();
        const Problem problem = build_problem(config);
        const PipelineRun run = run_pipeline(problem.quadrature, model_builder(config, problem.quadrature),
                                             config.model.n_design, config.sampler, config.seed);

        double min_slack = std::numeric_limits<double>::infinity();
        double max_residual = 0.0;
        for (const PathSample& sample : run.ensemble.rs_samples) {
          min_slack = std::min(min_slack, min_inequality_slack(sample.coefficients(), run.posterior.inequalities));
          for (std::size_t i = 0; i < run.info.size(); ++i) {
            max_residual = std::max(max_residual, std::abs(sample.slope(run.info.r[i]) - run.info.values[i]));
          }
        }
        const auto exact = exact_solution(config.problem);
        double sq = 0.0;
        double sd = 0.0;
        std::size_t count = 0;
        for (std::size_t g = 0; g < run.summary.x.size(); ++g) {
          if (!std::isfinite(run.summary.mean[g])) continue;
          const double e = run.summary.mean[g] - exact(run.summary.x[g]);
          sq += e * e;
          sd += run.summary.sd[g];
          ++count;
        }

        CsvWriter rs({"sample_id", "r", "s"});
        for (std::size_t i = 0; i < run.ensemble.rs_samples.size(); ++i) {
          const PathSample& sample = run.ensemble.rs_samples[i];
          for (const double r : sample.knots()) rs.row(i, {r, sample.s(r)});
        }
        CsvWriter xy({"sample_id", "x", "y"});
        for (std::size_t i = 0; i < run.ensemble.xy_curves.size(); ++i) {
          const XYCurve& curve = run.ensemble.xy_curves[i];
          for (std::size_t k = 0; k < curve.x.size(); ++k) xy.row(i, {curve.x[k], curve.y[k]});
        }
        CsvWriter mean({"x", "mean", "sd", "lower95", "upper95"});
        const PosteriorSummary& s = run.summary;
        for (std::size_t g = 0; g < s.x.size(); ++g) {
          mean.row({s.x[g], s.mean[g], s.sd[g], s.lower95[g], s.upper95[g]});
        }

        ArtifactDir dir(out);
        dir.write("samples_rs.csv", rs.str());
        dir.write("samples_xy.csv", xy.str());
        dir.write("mean_xy.csv", mean.str());

        std::size_t ties = 0;
        for (const XYCurve& c : run.ensemble.xy_curves) ties += c.ties_removed;
        const double rmse = count ? std::sqrt(sq / static_cast<double>(count)) : std::nan("");
        json summary{
            {"n_design", config.model.n_design},
            {"n_knots", run.posterior.size()},
            {"samples", run.ensemble.rs_samples.size()},
            {"degenerate", run.ensemble.diagnostics.degenerate},
            {"ties_removed", ties},
            {"x_range", {number(s.x.front()), number(s.x.back())}},
            {"rmse", number(rmse)},
            {"mean_sd", number(count ? sd / static_cast<double>(count) : std::nan(""))},
            {"min_inequality_slack", number(min_slack)},
            {"max_information_residual", max_residual},
            {"envelope_ok", min_slack >= kInequalitySlack},
            {"information_ok", max_residual <= kEqualityTolerance},
            {"well_defined", run.ensemble.diagnostics.degenerate == 0},
        };
        finish(dir, manifest_head("solve", config, started), std::move(summary));
        return static_cast<int>(kExitOk);
      },
      err);
}

int cmd_convergence(const RunConfig& config, const std::vector<std::size_t>& design_sizes, const fs::path& out,
                    std::ostream& err) {
  return run_guarded(
      [&] {
        if (design_sizes.empty()) throw ConfigError("design size list is empty");
        const std::string started = utc_timestamp();
        const Problem problem = build_problem(config);
        const std::vector<ContractionRow> rows =
            contraction_report(problem.quadrature, model_builder(config, problem.quadrature), design_sizes,
                               exact_solution(config.problem), config.sampler, config.seed);

        CsvWriter csv({"n", "rmse_of_mean", "mean_sd"});
        json table = json::array();
        for (const ContractionRow& r : rows) {
          csv.row(r.n, {r.rmse_of_mean, r.mean_sd});
          table.push_back({{"n", r.n}, {"rmse_of_mean", r.rmse_of_mean}, {"mean_sd", r.mean_sd}});
        }
        ArtifactDir dir(out);
        dir.write("convergence.csv", csv.str());
        json summary{{"rows", table},
                     {"rmse_ratio_last_first", rows.front().rmse_of_mean > 0.0
                                                   ? number(rows.back().rmse_of_mean / rows.front().rmse_of_mean)
                                                   : json(nullptr)},
                     {"rmse_decreased", rows.back().rmse_of_mean < rows.front().rmse_of_mean},
                     {"mean_sd_non_increasing", non_increasing(rows)}};
        finish(dir, manifest_head("convergence", config, started), std::move(summary));
        return static_cast<int>(kExitOk);
      },
      err);
}

int cmd_verify(const RunConfig& config, const fs::path& out, std::ostream& err) {
  return run_guarded(
      [&] {
        config.validate();
        const std::string started = utc_timestamp();
        const ProblemConfig& pc = config.problem;
        const GradientField field = make_field(pc);
        const CanonicalChart chart = homogeneous_chart(pc.x_T, pc.y0);
        const LieVectorField generator = named_field(config.verify.field);

        const SymmetryReport sym = admits_symmetry(field, generator, config.verify.points, config.verify.seed);

        Vector lower(2);
        Vector upper(2);
        lower << 1.0, pc.y_min;
        upper << pc.x_T, pc.y_max;
        const std::vector<Vector> points = sample_box(lower, upper, config.verify.points, config.verify.seed);
        const CanonicalReport canon = check_canonical(generator, chart.coordinate_system(), points);
        const double round_trip = chart_round_trip_error(chart, points);
        const double spread =
            g_s_independence_spread(field, chart, Interval{pc.y0, pc.r_max}, 20, 5, config.verify.seed);

        // Rotation group: Lie series against the closed form and polar
        // coordinates as canonical coordinates.
        Vector rot_lo(2);
        Vector rot_hi(2);
        rot_lo << 0.5, -1.5;
        rot_hi << 2.0, 1.5;
        const std::vector<Vector> rot_points = sample_box(rot_lo, rot_hi, config.verify.points, config.verify.seed);
        const LieVectorField rotation = rotation_field();
        const GroupTransformation rotation_map = rotation_group();
        double series_error = 0.0;
        for (const double eps : {0.1, 0.5, 1.0}) {
          for (const Vector& p : rot_points) {
            const LieSeriesResult r = lie_series(rotation, p, eps);
            series_error = std::max(series_error, (r.value - rotation_map.map(p, eps)).cwiseAbs().maxCoeff());
          }
        }
        const CanonicalReport polar = check_canonical(rotation, polar_coordinates(), rot_points);

        const bool round_trip_ok = round_trip <= kRoundTripTolerance;
        const bool spread_ok = spread <= kSpreadTolerance;
        const bool rotation_ok = series_error <= kRotationTolerance && polar.pass;
        const bool pass = sym.pass && canon.pass && round_trip_ok && spread_ok && rotation_ok;

        json report{
            {"field", config.verify.field},
            {"admits_symmetry",
             {{"max_abs", sym.max_abs}, {"max_raw", sym.max_raw}, {"points", sym.points}, {"pass", sym.pass}}},
            {"check_canonical",
             {{"max_invariant_defect", canon.max_invariant_defect},
              {"max_translation_defect", canon.max_translation_defect},
              {"pass", canon.pass}}},
            {"chart_round_trip", {{"max_error", round_trip}, {"pass", round_trip_ok}}},
            {"g_s_independence", {{"spread", spread}, {"pass", spread_ok}}},
            {"rotation_self_test",
             {{"lie_series_max_error", series_error},
              {"polar_invariant_defect", polar.max_invariant_defect},
              {"polar_translation_defect", polar.max_translation_defect},
              {"pass", rotation_ok}}},
            {"pass", pass},
        };
        ArtifactDir dir(out);
        dir.write("verify.json", report.dump(2) + "\n");
        finish(dir, manifest_head("verify", config, started), {{"pass", pass}});
        if (!pass) err << "verification failed for field '" << config.verify.field << "'; see verify.json\n";
        return static_cast<int>(pass ? kExitOk : kExitCheckFailed);
      },
      err);
}

int cmd_baseline(const RunConfig& config, double sigma, const fs::path& out, std::ostream& err) {
  return run_guarded(
      [&] {
        RunConfig c = config;
        c.baseline.sigma = sigma;
        c.validate();
        const std::string started = utc_timestamp();
        const GradientField field = make_field(c.problem);
        FilterConfig fc;
        fc.n = c.baseline.n;
        fc.sigma = sigma;
        fc.kernel = {c.baseline.kernel_variance, c.baseline.kernel_lengthscale};
        const FilterState state = run_filter(field, fc);
        const double sensitivity = ancillarity_sensitivity(field, fc, c.baseline.delta);

        CsvWriter csv({"x", "mean"});
        constexpr std::size_t kPoints = kDefaultGridSize;
        const Interval xs = field.x_domain;
        for (std::size_t i = 0; i < kPoints; ++i) {
          const double x = i + 1 == kPoints ? xs.hi
                                            : xs.lo + xs.width() * static_cast<double>(i) / (kPoints - 1);
          csv.row({x, predictive_mean(state, x)});
        }
        const json anc{{"sensitivity", sensitivity},
                       {"delta", c.baseline.delta},
                       {"perturbed_step", 1},
                       {"sigma", sigma},
                       {"n", c.baseline.n}};
        ArtifactDir dir(out);
        dir.write("baseline_mean.csv", csv.str());
        dir.write("ancillarity.json", anc.dump(2) + "\n");
        finish(dir, manifest_head("baseline", c, started), {{"ancillarity_sensitivity", sensitivity}});
        return static_cast<int>(kExitOk);
      },
      err);
}

}  // namespace lieprob::experiment
