#include <CLI11.hpp>

#include <cmath>
#include <iostream>

#include "bmc/cli.hpp"
#include "bmc/version.hpp"

namespace {

void add_common_options(CLI::App* cmd, bmc::cli::RunConfig& config,
                        CLI::Option** n_opt, CLI::Option** nbin_opt,
                        CLI::Option** dt_opt, CLI::Option** method_opt,
                        CLI::Option** xq_opt) {
  *method_opt =
      cmd->add_option("--method", config.method,
                      "Monte-Carlo method: forward | backward"
                      " (sweep also accepts 'both')");
  cmd->add_option("--scheme", config.scheme,
                  "equation-of-motion order: low | high (sweep also 'both')");
  *n_opt = cmd->add_option("--n", config.n_particles, "number of particles");
  *nbin_opt =
      cmd->add_option("--n-bin", config.n_bins, "number of bins (forward)");
  *dt_opt = cmd->add_option("--dt", config.dt, "time step");
  cmd->add_option("--T", config.horizon, "integration time");
  cmd->add_option("--x0", config.x0, "initial-condition peak location");
  cmd->add_option("--T0", config.T0, "initial-condition pre-smoothing time");
  *xq_opt = cmd->add_option("--x-query", config.x_query,
                            "query point (defaults to x0)");
  cmd->add_option("--query-range", config.query_range,
                  "query grid lo:hi:count");
  cmd->add_option("--seed", config.seed, "master seed");
  cmd->add_option("--repeats", config.repeats,
                  "independent seeds averaged per sweep row");
  cmd->add_option("--threads", config.threads,
                  "worker cap; 0 = hardware (results are thread-count"
                  " independent)");
  cmd->add_flag("--plot", config.plot, "also write an SVG log-log plot");
  cmd->add_flag("--paper-scale", config.paper_scale,
                "full-size ladders instead of desk-scale defaults");
  cmd->add_option("--boundary", config.boundary,
                  "overshoot handling: reflect | clamp");
  cmd->add_option("--launch", config.launch,
                  "forward launch points: grid | uniform | phi");
  cmd->add_option("--bin-range", config.bin_range,
                  "forward binning window lo:hi (default: full domain)");
  cmd->add_option("--out", config.out, "output CSV path");
  cmd->set_config("--config", "", "flat key=value config file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo solvers for 1D linear parabolic PDEs: binned "
               "forward and pointwise backward methods, an analytic "
               "pitch-angle-scattering benchmark, and error-scaling sweeps."};
  app.require_subcommand(1);
  app.set_version_flag("--version", bmc::kVersion);

  bmc::cli::RunConfig config;
  config.x_query = std::nan("");

  CLI::Option *n_opt = nullptr, *nbin_opt = nullptr, *dt_opt = nullptr,
              *method_opt = nullptr, *xq_opt = nullptr;

  CLI::App* solve =
      app.add_subcommand("solve", "run one solve and write a CSV of "
                                  "(x, estimate, std_error, analytic, rel_error)");
  add_common_options(solve, config, &n_opt, &nbin_opt, &dt_opt, &method_opt,
                     &xq_opt);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "sweep N, N_bin or dt and fit log-log error slopes");
  CLI::Option *s_n = nullptr, *s_nbin = nullptr, *s_dt = nullptr,
              *s_method = nullptr, *s_xq = nullptr;
  sweep->add_option("--sweep", config.sweep_param,
                    "swept parameter: n | nbin | dt")
      ->required();
  add_common_options(sweep, config, &s_n, &s_nbin, &s_dt, &s_method, &s_xq);

  CLI::App* validate = app.add_subcommand(
      "validate", "run the oracle cross-checks and print a pass/fail table");
  validate->add_option("--seed", config.seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (solve->parsed()) {
    config.command = "solve";
    config.n_given = n_opt->count() > 0;
    config.n_bins_given = nbin_opt->count() > 0;
    config.dt_given = dt_opt->count() > 0;
    config.method_given = method_opt->count() > 0;
    config.x_query_given = xq_opt->count() > 0;
  } else if (sweep->parsed()) {
    config.command = "sweep";
    config.n_given = s_n->count() > 0;
    config.n_bins_given = s_nbin->count() > 0;
    config.dt_given = s_dt->count() > 0;
    config.method_given = s_method->count() > 0;
    config.x_query_given = s_xq->count() > 0;
  } else {
    config.command = "validate";
  }

  if (const auto error = bmc::cli::validate_config(config)) {
    std::cerr << "config error: " << *error << "\n";
    return 2;
  }

  if (config.command == "solve") return bmc::cli::cmd_solve(config);
  if (config.command == "sweep") return bmc::cli::cmd_sweep(config);
  return bmc::cli::cmd_validate(config);
}
