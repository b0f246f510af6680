#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lieprob/experiment/commands.hpp"
#include "lieprob/experiment/config.hpp"

namespace ex = lieprob::experiment;

int main(int argc, char** argv) {
  CLI::App app{"Exact Bayesian solver for symmetric first-order ODEs"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string sizes = "4,8,16,32";
  std::optional<double> sigma;

  app.add_option("--config", config_path, "INI configuration file (default: builtin paper_sec3)");
  app.add_option("--seed", seed, "Override the run seed");
  app.add_option("--out", out, "Output directory (default: run.out, then $LIEPROB_OUT_ROOT/<command>)");

  CLI::App* solve = app.add_subcommand("solve", "Sample the posterior and write sample/mean CSVs");
  CLI::App* convergence = app.add_subcommand("convergence", "Posterior contraction over design sizes");
  convergence->add_option("--design-sizes", sizes, "Comma-separated design sizes");
  CLI::App* verify = app.add_subcommand("verify", "Symmetry, canonical-chart and rotation checks");
  CLI::App* baseline = app.add_subcommand("baseline", "Sequential Gaussian reference scheme");
  baseline->add_option("--sigma", sigma, "Observation noise sd (overrides baseline.sigma)");
  for (CLI::App* sub : {solve, convergence, verify, baseline}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ex::kExitConfig;
  }

  ex::RunConfig config;
  const int loaded = ex::run_guarded(
      [&] {
        config = config_path.empty() ? ex::builtin_config(ex::kDefaultBuiltin) : ex::load_config(config_path);
        if (seed) config.seed = *seed;
        config.validate();
        return 0;
      },
      std::cerr);
  if (loaded != 0) return loaded;

  const std::string command = app.get_subcommands().front()->get_name();
  const std::filesystem::path dir = out.empty() ? ex::default_output_dir(config, command) : std::filesystem::path(out);

  if (solve->parsed()) return ex::cmd_solve(config, dir, std::cerr);
  if (convergence->parsed()) {
    std::vector<std::size_t> list;
    const int rc = ex::run_guarded(
        [&] {
          list = ex::parse_design_sizes(sizes);
          return 0;
        },
        std::cerr);
    if (rc != 0) return rc;
    return ex::cmd_convergence(config, list, dir, std::cerr);
  }
  if (verify->parsed()) return ex::cmd_verify(config, dir, std::cerr);
  return ex::cmd_baseline(config, sigma.value_or(config.baseline.sigma), dir, std::cerr);
}
