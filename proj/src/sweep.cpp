#include "bmc/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "bmc/backward.hpp"

namespace bmc {

namespace {

constexpr double kFloorMultiplier = 3.0;
constexpr double kBackwardEpsCap = 0.08;
constexpr int kForwardFloorPoints = 3;
constexpr double kNbinSaturationEps = 0.5;

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double spread_se(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (const double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) /
                   static_cast<double>(v.size()));
}

}  // namespace

const char* to_string(Method m) {
  return m == Method::Forward ? "forward" : "backward";
}

const char* to_string(StepScheme s) {
  return s == StepScheme::LowOrder ? "low" : "high";
}

const char* to_string(SweptParameter p) {
  switch (p) {
    case SweptParameter::ParticleCount: return "n";
    case SweptParameter::BinCount: return "nbin";
    case SweptParameter::TimeStep: return "dt";
  }
  return "?";
}

double relative_error(double estimate, double exact) {
  if (!(exact > 0.0)) {
    throw std::invalid_argument("relative_error: exact value must be > 0");
  }
  return std::abs(estimate - exact) / exact;
}

SlopeFit fit_slope(std::span<const SweepPoint> points,
                   const FitOptions& options) {
  SlopeFit fit;
  std::vector<double> xs, ys;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    const SweepPoint& p = points[static_cast<std::size_t>(i)];
    if (!(p.eps > 0.0)) {
      throw std::invalid_argument("fit_slope: non-positive error value");
    }
    const bool saturated = options.drop_saturated && p.eps == 1.0;
    if (saturated || p.eps < options.min_eps || p.eps > options.max_eps ||
        p.param < options.min_param || p.param > options.max_param) {
      fit.excluded_indices.push_back(i);
      continue;
    }
    xs.push_back(std::log10(p.param));
    ys.push_back(std::log10(p.eps));
  }
  if (xs.size() < 2) {
    throw std::invalid_argument(
        "fit_slope: fewer than two points survive exclusion");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("fit_slope: degenerate abscissa");
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_points_used = static_cast<int>(xs.size());
  return fit;
}

std::vector<double> decade_ladder(double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("decade_ladder: need 0 < lo <= hi");
  }
  static constexpr double mantissas[3] = {1.0, 2.0, 5.0};
  std::vector<double> out;
  const int k_lo = static_cast<int>(std::floor(std::log10(lo))) - 1;
  const int k_hi = static_cast<int>(std::ceil(std::log10(hi))) + 1;
  for (int k = k_lo; k <= k_hi; ++k) {
    for (const double m : mantissas) {
      const double v = m * std::pow(10.0, k);
      if (v >= lo * (1.0 - 1e-9) && v <= hi * (1.0 + 1e-9)) out.push_back(v);
    }
  }
  return out;
}

SweepResult run_sweep(const SweepSpec& spec, const LorentzProblem& problem,
                      const LegendreSeries& series) {
  if (spec.values.empty()) {
    throw std::invalid_argument("run_sweep: no sweep values");
  }
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > 0.0)) {
      throw std::invalid_argument("run_sweep: sweep values must be positive");
    }
    if (i > 0 && !(spec.values[i] > spec.values[i - 1])) {
      throw std::invalid_argument(
          "run_sweep: sweep values must be strictly increasing");
    }
  }
  if (spec.n_repeats < 1) {
    throw std::invalid_argument("run_sweep: n_repeats must be >= 1");
  }

  SweepResult result;
  result.spec = spec;
  result.exact = analytic_solution(problem, series, spec.fixed.x_query,
                                   spec.fixed.horizon);
  const SeriesEvaluator phi(problem, series, 0.0);
  const LorentzModel& model = problem.model;

  for (const double value : spec.values) {
    std::int64_t n_particles = spec.fixed.n_particles;
    int n_bins = spec.fixed.n_bins;
    double dt = spec.fixed.dt;
    switch (spec.swept) {
      case SweptParameter::ParticleCount:
        n_particles = static_cast<std::int64_t>(std::llround(value));
        break;
      case SweptParameter::BinCount:
        n_bins = static_cast<int>(std::llround(value));
        break;
      case SweptParameter::TimeStep:
        dt = value;
        break;
    }
    for (const Method method : spec.fixed.methods) {
      for (const StepScheme scheme : spec.fixed.schemes) {
        SweepRow row;
        row.param = value;
        row.method = method;
        row.scheme = scheme;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          std::vector<double> eps(static_cast<std::size_t>(spec.n_repeats));
          std::vector<double> stat(static_cast<std::size_t>(spec.n_repeats), 0.0);
          for (int r = 0; r < spec.n_repeats; ++r) {
            const std::uint64_t seed =
                spec.master_seed + static_cast<std::uint64_t>(r);
            const TimeGrid grid(spec.fixed.horizon, dt);
            double estimate = 0.0;
            if (method == Method::Backward) {
              const PointEstimate est =
                  solve_backward(model, phi, spec.fixed.x_query, grid, scheme,
                                 n_particles, seed, spec.n_workers);
              estimate = est.value;
              stat[static_cast<std::size_t>(r)] = est.std_error / result.exact;
            } else {
              ForwardOptions opt;
              opt.launch = spec.fixed.launch;
              opt.n_workers = spec.n_workers;
              const BinnedSolution sol =
                  solve_forward(model, phi, grid, scheme, n_particles, n_bins,
                                seed, opt);
              estimate = eval_binned(sol, spec.fixed.x_query);
            }
            if (estimate == 0.0) ++row.n_zero_estimates;
            eps[static_cast<std::size_t>(r)] =
                relative_error(estimate, result.exact);
          }
          row.epsilon = mean(eps);
          row.std_error = spread_se(eps);
          if (method == Method::Backward) row.stat_se = mean(stat);
        } catch (const std::exception& e) {
          row.ok = false;
          row.message = e.what();
          row.epsilon = std::numeric_limits<double>::quiet_NaN();
        }
        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

std::vector<SweepPoint> select_points(const SweepResult& result, Method method,
                                      StepScheme scheme,
                                      bool drop_zero_estimate_rows) {
  std::vector<SweepPoint> out;
  for (const SweepRow& row : result.rows) {
    if (row.method != method || row.scheme != scheme || !row.ok) continue;
    if (drop_zero_estimate_rows && row.n_zero_estimates > 0) continue;
    out.push_back({row.param, row.epsilon});
  }
  return out;
}

SlopeFit fit_n_scaling(const SweepResult& result, Method method,
                       StepScheme scheme) {
  const bool drop_zeros = method == Method::Forward;
  const auto points = select_points(result, method, scheme, drop_zeros);
  return fit_slope(points);
}

NbinFits fit_nbin_scaling(const SweepResult& result, StepScheme scheme) {
  const auto points = select_points(result, Method::Forward, scheme, true);
  if (points.size() < 3) {
    throw std::invalid_argument("fit_nbin_scaling: too few usable rows");
  }
  NbinFits fits;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].eps <
        points[static_cast<std::size_t>(fits.argmin_index)].eps) {
      fits.argmin_index = static_cast<int>(i);
    }
  }
  const std::size_t split = static_cast<std::size_t>(fits.argmin_index);
  const std::vector<SweepPoint> small(points.begin(),
                                      points.begin() + split + 1);
  const std::vector<SweepPoint> large(points.begin() + split, points.end());
  FitOptions small_opt;
  small_opt.max_eps = kNbinSaturationEps;
  fits.small_side = fit_slope(small, small_opt);
  fits.large_side = fit_slope(large);
  return fits;
}

DtFitResult fit_dt_scaling(const SweepResult& result, Method method,
                           StepScheme scheme) {
  const auto points = select_points(result, method, scheme, false);
  if (points.size() < 3) {
    throw std::invalid_argument("fit_dt_scaling: too few usable rows");
  }
  DtFitResult out;
  if (method == Method::Backward) {
    double floor_se = 0.0;
    bool found = false;
    for (const SweepRow& row : result.rows) {
      if (row.method == method && row.scheme == scheme && row.ok &&
          row.param == points.front().param) {
        floor_se = row.stat_se;
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("fit_dt_scaling: missing smallest-dt row");
    }
    out.floor_threshold = kFloorMultiplier * floor_se;
    out.eps_cap = kBackwardEpsCap;
  } else {
    const int k = std::min<int>(kForwardFloorPoints,
                                static_cast<int>(points.size()));
    double acc = 0.0;
    for (int i = 0; i < k; ++i) acc += points[static_cast<std::size_t>(i)].eps;
    out.floor_threshold = kFloorMultiplier * acc / static_cast<double>(k);
  }

  FitOptions window;
  window.min_eps = out.floor_threshold;
  window.max_eps = out.eps_cap;
  out.prefloor = fit_slope(points, window);

  std::vector<SweepPoint> sub;
  for (const SweepPoint& p : points) {
    if (p.eps <= out.floor_threshold) sub.push_back(p);
  }
  if (sub.size() >= 2) {
    out.subfloor = fit_slope(sub);
    out.has_subfloor = true;
  }
  return out;
}

}  // namespace bmc
