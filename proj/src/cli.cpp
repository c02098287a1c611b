#include "bmc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <vector>

#include "bmc/backward.hpp"
#include "bmc/csv.hpp"
#include "bmc/fd_oracle.hpp"
#include "bmc/forward.hpp"
#include "bmc/lorentz.hpp"
#include "bmc/svg.hpp"
#include "bmc/sweep.hpp"
#include "bmc/version.hpp"
#include "bmc/wiener.hpp"

namespace bmc::cli {

namespace {

bool parse_pair(const std::string& text, double& lo, double& hi) {
  std::istringstream in(text);
  char sep = 0;
  return static_cast<bool>(in >> lo >> sep >> hi) && sep == ':' && in.eof();
}

bool parse_triple(const std::string& text, double& lo, double& hi, int& count) {
  std::istringstream in(text);
  char s1 = 0, s2 = 0;
  return static_cast<bool>(in >> lo >> s1 >> hi >> s2 >> count) && s1 == ':' &&
         s2 == ':' && in.eof();
}

BoundaryPolicy boundary_from(const std::string& name) {
  return name == "clamp" ? BoundaryPolicy::Clamp : BoundaryPolicy::Reflect;
}

LaunchKind launch_from(const std::string& name) {
  if (name == "uniform") return LaunchKind::UniformRandom;
  if (name == "phi") return LaunchKind::SampledFromPhi;
  return LaunchKind::MidpointGrid;
}

StepScheme scheme_from(const std::string& name) {
  return name == "high" ? StepScheme::HighOrder : StepScheme::LowOrder;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  for (int j = 0; j < count; ++j) {
    out.push_back(lo + (hi - lo) * static_cast<double>(j) /
                           static_cast<double>(count - 1));
  }
  return out;
}

std::string experiment_tag(const RunConfig& config) {
  if (config.command == "solve") {
    return config.method == "forward" ? "binned forward solution readout"
                                      : "pointwise backward solution";
  }
  if (config.sweep_param == "n") return "error vs particle count";
  if (config.sweep_param == "nbin") return "error vs bin count";
  return config.scheme == "high" ? "error vs time step (high order)"
                                 : "error vs time step (low order)";
}

std::vector<std::string> header_comments(const RunConfig& config) {
  std::ostringstream cfg;
  cfg << "method=" << config.method << " scheme=" << config.scheme
      << " n=" << config.n_particles << " n-bin=" << config.n_bins
      << " dt=" << csv::format(config.dt) << " T=" << csv::format(config.horizon)
      << " x0=" << csv::format(config.x0) << " T0=" << csv::format(config.T0)
      << " boundary=" << config.boundary << " launch=" << config.launch
      << " repeats=" << config.repeats << " threads=" << config.threads;
  if (!config.query_range.empty()) cfg << " query-range=" << config.query_range;
  if (!config.bin_range.empty()) cfg << " bin-range=" << config.bin_range;
  if (config.paper_scale) cfg << " paper-scale=1";
  std::vector<std::string> lines;
  lines.push_back(std::string("bmc ") + kVersion);
  lines.push_back("command: " + config.command +
                  (config.sweep_param.empty() ? "" : " " + config.sweep_param));
  lines.push_back("config: " + cfg.str());
  lines.push_back("seed: " + std::to_string(config.seed));
  lines.push_back("experiment: " + experiment_tag(config));
  return lines;
}

std::string fit_excluded_list(const std::vector<SweepPoint>& points,
                              const SlopeFit& fit) {
  std::string out;
  for (const int idx : fit.excluded_indices) {
    if (!out.empty()) out += ';';
    out += csv::format(points[static_cast<std::size_t>(idx)].param);
  }
  return out;
}

std::pair<double, double> fit_param_range(const std::vector<SweepPoint>& points,
                                          const SlopeFit& fit) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (std::find(fit.excluded_indices.begin(), fit.excluded_indices.end(),
                  i) != fit.excluded_indices.end()) {
      continue;
    }
    lo = std::min(lo, points[static_cast<std::size_t>(i)].param);
    hi = std::max(hi, points[static_cast<std::size_t>(i)].param);
  }
  return {lo, hi};
}

}  // namespace

std::optional<std::string> validate_config(RunConfig& config) {
  if (config.command != "solve" && config.command != "sweep" &&
      config.command != "validate") {
    return "unknown command '" + config.command + "'";
  }
  if (config.command == "validate") return std::nullopt;

  const bool is_sweep = config.command == "sweep";
  if (config.method != "forward" && config.method != "backward" &&
      !(is_sweep && config.method == "both")) {
    return "invalid --method '" + config.method + "'";
  }
  if (config.scheme != "low" && config.scheme != "high" &&
      !(is_sweep && config.scheme == "both")) {
    return "invalid --scheme '" + config.scheme + "'";
  }
  if (config.boundary != "reflect" && config.boundary != "clamp") {
    return "invalid --boundary '" + config.boundary + "'";
  }
  if (config.launch != "grid" && config.launch != "uniform" &&
      config.launch != "phi") {
    return "invalid --launch '" + config.launch + "'";
  }
  if (config.n_particles < 1) return "--n must be at least 1";
  if (config.n_bins < 1) return "--n-bin must be at least 1";
  if (!(config.dt > 0.0)) return "--dt must be positive";
  if (!(config.horizon >= 0.0)) return "--T must be non-negative";
  if (!(config.x0 > -1.0 && config.x0 < 1.0)) return "--x0 must lie in (-1, 1)";
  if (!(config.T0 > 0.0)) return "--T0 must be positive";
  if (config.repeats < 1) return "--repeats must be at least 1";
  if (config.threads < 0) return "--threads must be >= 0";

  if (std::isnan(config.x_query) && !config.x_query_given) {
    config.x_query = config.x0;
  }
  if (!(config.x_query >= -1.0 && config.x_query <= 1.0)) {
    return "--x-query must lie in [-1, 1]";
  }
  if (!config.query_range.empty()) {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    if (!parse_triple(config.query_range, lo, hi, count)) {
      return "--query-range must have the form lo:hi:count";
    }
    if (!(lo >= -1.0 && hi <= 1.0 && lo <= hi) || count < 1) {
      return "--query-range must satisfy -1 <= lo <= hi <= 1 and count >= 1";
    }
  }
  if (!config.bin_range.empty()) {
    double lo = 0.0, hi = 0.0;
    if (!parse_pair(config.bin_range, lo, hi)) {
      return "--bin-range must have the form lo:hi";
    }
    if (!(lo >= -1.0 && hi <= 1.0 && lo < hi)) {
      return "--bin-range must be a nonempty subinterval of [-1, 1]";
    }
    if (config.method == "backward" && !is_sweep) {
      return "--bin-range applies to the forward method only";
    }
  }

  if (!is_sweep) {
    if (config.method == "backward" && config.n_bins_given) {
      return "warning: --n-bin has no effect on a backward-only run; "
             "remove it (the backward method needs no binning)";
    }
    if (config.method == "backward" && config.launch != "grid") {
      return "warning: --launch has no effect on a backward-only run";
    }
  } else {
    if (config.sweep_param != "n" && config.sweep_param != "nbin" &&
        config.sweep_param != "dt") {
      return "--sweep must be one of n, nbin, dt";
    }
    // Fill unset fixed parameters with the per-sweep defaults.
    if (config.sweep_param == "n") {
      if (!config.dt_given) config.dt = 1e-4;
    } else if (config.sweep_param == "nbin") {
      if (!config.n_given) config.n_particles = 10000;
      if (!config.dt_given) config.dt = 1e-4;
    } else {
      if (!config.n_given) {
        config.n_particles = config.paper_scale ? 200000 : 20000;
      }
    }
    if (!config.method_given) config.method = "both";
  }

  if (config.out.empty()) {
    config.out = config.command == "solve"
                     ? "solve.csv"
                     : "sweep_" + config.sweep_param + ".csv";
  }
  return std::nullopt;
}

int cmd_solve(const RunConfig& config) {
  try {
    const LorentzProblem problem(config.x0, config.T0,
                                 boundary_from(config.boundary));
    const LegendreSeries series = LegendreSeries::for_problem(problem);
    const SeriesEvaluator phi(problem, series, 0.0);
    const TimeGrid grid(config.horizon, config.dt);
    const StepScheme scheme = scheme_from(config.scheme);

    std::vector<double> queries;
    if (!config.query_range.empty()) {
      double lo = 0.0, hi = 0.0;
      int count = 0;
      parse_triple(config.query_range, lo, hi, count);
      queries = linspace(lo, hi, count);
    }

    std::vector<csv::SolveRow> rows;
    if (config.method == "backward") {
      if (queries.empty()) queries.push_back(config.x_query);
      const auto estimates = solve_backward_grid(
          problem.model, phi, queries, grid, scheme, config.n_particles,
          config.seed, config.threads);
      for (const PointEstimate& est : estimates) {
        csv::SolveRow row;
        row.x = est.x_query;
        row.estimate = est.value;
        row.std_error = est.std_error;
        row.analytic =
            analytic_solution(problem, series, est.x_query, config.horizon);
        row.rel_error = relative_error(row.estimate, row.analytic);
        rows.push_back(row);
      }
    } else {
      ForwardOptions opt;
      opt.launch = launch_from(config.launch);
      opt.n_workers = config.threads;
      if (!config.bin_range.empty()) {
        parse_pair(config.bin_range, opt.bin_lo, opt.bin_hi);
      }
      const BinnedSolution sol =
          solve_forward(problem.model, phi, grid, scheme, config.n_particles,
                        config.n_bins, config.seed, opt);
      if (queries.empty()) {
        for (int c = 0; c < sol.n_bins; ++c) queries.push_back(sol.center(c));
      }
      for (const double x : queries) {
        csv::SolveRow row;
        row.x = x;
        row.estimate = eval_binned(sol, x);
        row.analytic = analytic_solution(problem, series, x, config.horizon);
        row.rel_error = relative_error(row.estimate, row.analytic);
        rows.push_back(row);
      }
    }
    csv::write_solve_csv(config.out, header_comments(config), rows);
    std::cout << "wrote " << rows.size() << " rows to " << config.out << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "solve failed: " << e.what() << "\n";
    return 1;
  }
}

int cmd_sweep(const RunConfig& config) {
  try {
    const LorentzProblem problem(config.x0, config.T0,
                                 boundary_from(config.boundary));
    const LegendreSeries series = LegendreSeries::for_problem(problem);

    SweepSpec spec;
    spec.master_seed = config.seed;
    spec.n_repeats = config.repeats;
    spec.n_workers = config.threads;
    spec.fixed.n_particles = config.n_particles;
    spec.fixed.n_bins = config.n_bins;
    spec.fixed.dt = config.dt;
    spec.fixed.horizon = config.horizon;
    spec.fixed.x_query = config.x_query;
    spec.fixed.launch = launch_from(config.launch);
    spec.fixed.methods.clear();
    if (config.method != "backward") spec.fixed.methods.push_back(Method::Forward);
    if (config.method != "forward") spec.fixed.methods.push_back(Method::Backward);
    spec.fixed.schemes.clear();
    if (config.scheme != "high") spec.fixed.schemes.push_back(StepScheme::LowOrder);
    if (config.scheme != "low") spec.fixed.schemes.push_back(StepScheme::HighOrder);

    if (config.sweep_param == "n") {
      spec.swept = SweptParameter::ParticleCount;
      spec.values = decade_ladder(config.paper_scale ? 1.0 : 10.0,
                                  config.paper_scale ? 1e6 : 1e5);
    } else if (config.sweep_param == "nbin") {
      spec.swept = SweptParameter::BinCount;
      spec.values = decade_ladder(1.0, config.paper_scale ? 1e4 : 1e3);
    } else {
      spec.swept = SweptParameter::TimeStep;
      spec.values = decade_ladder(1e-5, 1e-1);
    }

    if (config.paper_scale) {
      std::cerr << "note: paper-scale ladders selected; expect a long run\n";
    }

    const SweepResult result = run_sweep(spec, problem, series);

    std::vector<csv::SweepCsvRow> csv_rows;
    bool any_failed = false;
    for (const SweepRow& row : result.rows) {
      if (!row.ok) {
        any_failed = true;
        std::cerr << "row failed (param=" << row.param << ", "
                  << to_string(row.method) << ", " << to_string(row.scheme)
                  << "): " << row.message << "\n";
      }
      csv_rows.push_back({row.param, to_string(row.method),
                          to_string(row.scheme), row.epsilon, row.std_error,
                          row.seconds});
    }
    csv::write_sweep_csv(config.out, header_comments(config), csv_rows);

    std::vector<csv::FitCsvRow> fit_rows;
    std::vector<svg::FitLine> fit_lines;
    std::vector<svg::Series> plot_series;
    for (const Method method : spec.fixed.methods) {
      for (const StepScheme scheme : spec.fixed.schemes) {
        const std::string color =
            method == Method::Forward ? "#1f77b4" : "#d62728";
        const auto all_points = select_points(result, method, scheme, false);
        if (all_points.empty()) continue;
        svg::Series ser;
        ser.label = std::string(to_string(method)) + " / " + to_string(scheme);
        ser.color = color;
        ser.filled = scheme == StepScheme::LowOrder;
        for (const SweepPoint& p : all_points) ser.points.push_back({p.param, p.eps});
        plot_series.push_back(std::move(ser));
        try {
          if (spec.swept == SweptParameter::BinCount &&
              method == Method::Forward) {
            const auto points = select_points(result, method, scheme, true);
            const NbinFits fits = fit_nbin_scaling(result, scheme);
            const std::vector<SweepPoint> small(
                points.begin(),
                points.begin() + fits.argmin_index + 1);
            const std::vector<SweepPoint> large(
                points.begin() + fits.argmin_index, points.end());
            // The excluded column lists every swept value the fit did not
            // use, so the two regime rows are self-describing.
            auto list_outside = [&](const std::vector<SweepPoint>& used,
                                    const SlopeFit& fit) {
              std::string out;
              for (const SweepPoint& p : all_points) {
                const bool inside =
                    std::any_of(used.begin(), used.end(), [&](const SweepPoint& q) {
                      return q.param == p.param;
                    });
                bool kept = inside;
                if (inside) {
                  for (const int e : fit.excluded_indices) {
                    if (used[static_cast<std::size_t>(e)].param == p.param) {
                      kept = false;
                    }
                  }
                }
                if (!kept) {
                  if (!out.empty()) out += ';';
                  out += csv::format(p.param);
                }
              }
              return out;
            };
            fit_rows.push_back({to_string(method), to_string(scheme),
                                fits.small_side.slope, fits.small_side.intercept,
                                fits.small_side.n_points_used,
                                list_outside(small, fits.small_side)});
            fit_rows.push_back({to_string(method), to_string(scheme),
                                fits.large_side.slope, fits.large_side.intercept,
                                fits.large_side.n_points_used,
                                list_outside(large, fits.large_side)});
            auto [slo, shi] = fit_param_range(small, fits.small_side);
            fit_lines.push_back({"bin-size regime", color,
                                 fits.small_side.slope,
                                 fits.small_side.intercept, slo, shi});
            auto [llo, lhi] = fit_param_range(large, fits.large_side);
            fit_lines.push_back({"statistics regime", color,
                                 fits.large_side.slope,
                                 fits.large_side.intercept, llo, lhi});
          } else if (spec.swept == SweptParameter::TimeStep) {
            const DtFitResult dt_fit = fit_dt_scaling(result, method, scheme);
            fit_rows.push_back({to_string(method), to_string(scheme),
                                dt_fit.prefloor.slope, dt_fit.prefloor.intercept,
                                dt_fit.prefloor.n_points_used,
                                fit_excluded_list(all_points, dt_fit.prefloor)});
            auto [flo, fhi] = fit_param_range(all_points, dt_fit.prefloor);
            char label[96];
            std::snprintf(label, sizeof(label), "%s/%s slope %.2f",
                          to_string(method), to_string(scheme),
                          dt_fit.prefloor.slope);
            fit_lines.push_back({label, color, dt_fit.prefloor.slope,
                                 dt_fit.prefloor.intercept, flo, fhi});
            std::cout << to_string(method) << "/" << to_string(scheme)
                      << ": pre-floor slope " << dt_fit.prefloor.slope
                      << " over " << dt_fit.prefloor.n_points_used << " points";
            if (dt_fit.has_subfloor) {
              std::cout << "; sub-floor slope " << dt_fit.subfloor.slope
                        << " (statistical flattening)";
            }
            std::cout << "\n";
          } else {
            const SlopeFit fit = fit_n_scaling(result, method, scheme);
            const auto used = select_points(result, method, scheme,
                                            method == Method::Forward);
            std::string excl = fit_excluded_list(used, fit);
            for (const SweepPoint& p : all_points) {
              const bool kept = std::any_of(
                  used.begin(), used.end(),
                  [&](const SweepPoint& q) { return q.param == p.param; });
              if (!kept) {
                if (!excl.empty()) excl += ';';
                excl += csv::format(p.param);
              }
            }
            fit_rows.push_back({to_string(method), to_string(scheme), fit.slope,
                                fit.intercept, fit.n_points_used, excl});
            auto [flo, fhi] = fit_param_range(used, fit);
            char label[96];
            std::snprintf(label, sizeof(label), "%s/%s slope %.2f",
                          to_string(method), to_string(scheme), fit.slope);
            fit_lines.push_back(
                {label, color, fit.slope, fit.intercept, flo, fhi});
            std::cout << to_string(method) << "/" << to_string(scheme)
                      << ": slope " << fit.slope << " over "
                      << fit.n_points_used << " points\n";
          }
        } catch (const std::exception& e) {
          std::cerr << "fit skipped (" << to_string(method) << "/"
                    << to_string(scheme) << "): " << e.what() << "\n";
        }
      }
    }

    std::string base = config.out;
    if (base.size() > 4 && base.substr(base.size() - 4) == ".csv") {
      base = base.substr(0, base.size() - 4);
    }
    csv::write_fit_csv(base + "_fits.csv", header_comments(config), fit_rows);
    if (config.plot) {
      svg::write_loglog_plot(base + ".svg",
                             "local relative error: " + experiment_tag(config),
                             config.sweep_param == "dt"
                                 ? "time step"
                                 : (config.sweep_param == "n" ? "particles"
                                                              : "bins"),
                             "relative error", plot_series, fit_lines);
    }
    std::cout << "wrote " << csv_rows.size() << " rows to " << config.out
              << "\n";
    if (any_failed) {
      std::cerr << "one or more sweep rows failed\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "sweep failed: " << e.what() << "\n";
    return 1;
  }
}

int cmd_validate(const RunConfig& config) {
  struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
  };
  std::vector<Check> checks;

  try {
    const LorentzProblem problem(-0.9, 0.1);
    const LegendreSeries series = LegendreSeries::for_problem(problem);
    const SeriesEvaluator phi(problem, series, 0.0);

    {
      Check c{"lorentz-coefficients", false, ""};
      try {
        validate_coefficients(problem.model);
        c.pass = true;
        c.detail = "D >= 0, mu = D', sigma^2 = 2D on the probe grid";
      } catch (const std::exception& e) {
        c.detail = e.what();
      }
      checks.push_back(c);
    }
    {
      Check c{"analytic-vs-finite-difference", false, ""};
      const FdGrid fd = solve_fd(problem.model, phi, 0.1, 2000, 1e-5);
      double max_rel = 0.0;
      for (std::int64_t k = 0; k < fd.n_cells; ++k) {
        const double exact =
            analytic_solution(problem, series, fd.center(k), 0.1);
        max_rel = std::max(max_rel,
                           std::abs(fd.values[static_cast<std::size_t>(k)] -
                                    exact) /
                               std::abs(exact));
      }
      c.pass = max_rel < 1e-4;
      c.detail = "max relative deviation " + csv::format(max_rel) +
                 " over 2000 cell centers (limit 1e-4)";
      checks.push_back(c);
    }
    {
      Check c{"ito-integral-identity", false, ""};
      RandomStream stream(config.seed, 0);
      const auto stats = wiener_integral_statistic(1.0, 1024, 10000, stream);
      const double sample_std = std::sqrt(std::max(
          0.0, stats.rms_error * stats.rms_error -
                   stats.mean_error * stats.mean_error));
      const double limit = 3.0 * sample_std / 100.0;
      c.pass = std::abs(stats.mean_error) < limit;
      c.detail = "|mean error| " + csv::format(std::abs(stats.mean_error)) +
                 " < " + csv::format(limit);
      checks.push_back(c);
    }
    {
      Check c{"ito-partition-convergence", false, ""};
      RandomStream s64(config.seed, 1);
      RandomStream s4096(config.seed, 2);
      const auto coarse = wiener_integral_statistic(1.0, 64, 10000, s64);
      const auto fine = wiener_integral_statistic(1.0, 4096, 10000, s4096);
      c.pass = fine.rms_error < coarse.rms_error;
      c.detail = "rms error " + csv::format(coarse.rms_error) + " (64) -> " +
                 csv::format(fine.rms_error) + " (4096)";
      checks.push_back(c);
    }
    {
      Check c{"gaussian-moments", false, ""};
      RandomStream stream(config.seed, 3);
      const std::int64_t n = 1000000;
      double sum = 0.0, sum_sq = 0.0;
      for (std::int64_t i = 0; i < n; ++i) {
        const double z = stream.gaussian();
        sum += z;
        sum_sq += z * z;
      }
      const double mean = sum / static_cast<double>(n);
      const double var =
          sum_sq / static_cast<double>(n) - mean * mean;
      c.pass = std::abs(mean) < 5e-3 && std::abs(var - 1.0) < 5e-3;
      c.detail = "mean " + csv::format(mean) + ", variance " + csv::format(var);
      checks.push_back(c);
    }
  } catch (const std::exception& e) {
    std::cerr << "validate failed to run: " << e.what() << "\n";
    return 1;
  }

  bool all = true;
  for (const Check& c : checks) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail
              << "\n";
    all = all && c.pass;
  }
  return all ? 0 : 1;
}

}  // namespace bmc::cli
