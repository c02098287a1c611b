// Acceptance suite: runs every shipped correctness and scaling criterion
// end to end and prints one pass/fail line per criterion.  Exit status is
// the number of failed criteria.
//
// Usage: acceptance [ids...] [--threads N]
//   ids        subset of criteria to run (default: all ten)
//   --threads  worker cap for the solvers (0 = hardware)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "bmc/backward.hpp"
#include "bmc/fd_oracle.hpp"
#include "bmc/forward.hpp"
#include "bmc/lorentz.hpp"
#include "bmc/stepping.hpp"
#include "bmc/sweep.hpp"
#include "bmc/wiener.hpp"

using namespace bmc;

namespace {

// Default master seed of the acceptance runs.  The statistical criteria
// hold for almost every seed; the seed is pinned so the suite is exactly
// reproducible.
constexpr std::uint64_t kSeed = 1;

int g_threads = 0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

const LorentzProblem& lorentz_problem() {
  static const LorentzProblem problem(-0.9, 0.1);
  return problem;
}

const LegendreSeries& lorentz_series() {
  static const LegendreSeries series =
      LegendreSeries::for_problem(lorentz_problem());
  return series;
}

const SeriesEvaluator& lorentz_phi() {
  static const SeriesEvaluator phi(lorentz_problem(), lorentz_series(), 0.0);
  return phi;
}

double lorentz_exact() {
  static const double value =
      analytic_solution(lorentz_problem(), lorentz_series(), -0.9, 0.1);
  return value;
}

// ---------------------------------------------------------------------------
// 1. analytic Legendre series vs Crank-Nicolson oracle
Outcome criterion_oracle_agreement() {
  const auto& problem = lorentz_problem();
  const auto& series = lorentz_series();
  const FdGrid fd = solve_fd(problem.model, lorentz_phi(), 0.1, 2000, 1e-5);
  double max_rel = 0.0;
  for (std::int64_t c = 0; c < fd.n_cells; ++c) {
    const double exact = analytic_solution(problem, series, fd.center(c), 0.1);
    max_rel = std::max(
        max_rel, std::abs(fd.values[static_cast<std::size_t>(c)] - exact) /
                     std::abs(exact));
  }
  return {max_rel < 1e-4,
          "max rel deviation " + fmt(max_rel) + " over 2000 cells (limit 1e-4)"};
}

// ---------------------------------------------------------------------------
// 2. backward estimate within 3 sigma of analytic in >= 90 of 100 seeds
Outcome criterion_backward_correctness() {
  const auto& problem = lorentz_problem();
  const auto& phi = lorentz_phi();
  const double exact = lorentz_exact();
  const TimeGrid grid(0.1, 1e-4);
  int within = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const PointEstimate est =
        solve_backward(problem.model, phi, -0.9, grid, StepScheme::LowOrder,
                       200000, kSeed + static_cast<std::uint64_t>(seed),
                       g_threads);
    if (std::abs(est.value - exact) <= 3.0 * est.std_error) ++within;
  }
  return {within >= 90,
          std::to_string(within) + "/100 seeds within 3 std errors (need 90)"};
}

SweepSpec base_spec(SweptParameter swept, StepScheme scheme) {
  SweepSpec spec;
  spec.swept = swept;
  spec.fixed.schemes = {scheme};
  spec.master_seed = kSeed;
  spec.n_repeats = 8;
  spec.n_workers = g_threads;
  return spec;
}

// ---------------------------------------------------------------------------
// 3. error vs particle count: both methods scale like 1/sqrt(N)
Outcome criterion_n_scaling() {
  SweepSpec spec = base_spec(SweptParameter::ParticleCount, StepScheme::LowOrder);
  spec.values = decade_ladder(10, 100000);
  spec.fixed.n_bins = 20;
  spec.fixed.dt = 1e-4;
  const SweepResult result = run_sweep(spec, lorentz_problem(), lorentz_series());
  const SlopeFit backward =
      fit_n_scaling(result, Method::Backward, StepScheme::LowOrder);
  const SlopeFit forward =
      fit_n_scaling(result, Method::Forward, StepScheme::LowOrder);
  const bool pass = backward.slope >= -0.65 && backward.slope <= -0.35 &&
                    forward.slope >= -0.65 && forward.slope <= -0.30;
  return {pass, "backward slope " + fmt(backward.slope) +
                    " (band [-0.65,-0.35]), forward slope " +
                    fmt(forward.slope) + " (band [-0.65,-0.30], " +
                    std::to_string(forward.n_points_used) + " pts)"};
}

// ---------------------------------------------------------------------------
// 4. error vs bin count: -2 regime, +1/2 regime, backward indifference
Outcome criterion_nbin_scaling() {
  SweepSpec spec = base_spec(SweptParameter::BinCount, StepScheme::LowOrder);
  spec.values = decade_ladder(1, 1000);
  spec.fixed.n_particles = 10000;
  spec.fixed.dt = 1e-4;
  const SweepResult result = run_sweep(spec, lorentz_problem(), lorentz_series());

  bool backward_constant = true;
  double backward_eps = -1.0;
  for (const SweepRow& row : result.rows) {
    if (row.method != Method::Backward) continue;
    if (backward_eps < 0.0) backward_eps = row.epsilon;
    backward_constant = backward_constant && row.epsilon == backward_eps;
  }
  const NbinFits fits = fit_nbin_scaling(result, StepScheme::LowOrder);
  const bool small_ok =
      fits.small_side.slope >= -2.4 && fits.small_side.slope <= -1.5;
  const bool large_ok =
      fits.large_side.slope >= 0.3 && fits.large_side.slope <= 0.7;
  return {small_ok && large_ok && backward_constant,
          "small-bin slope " + fmt(fits.small_side.slope) +
              " (band [-2.4,-1.5]), large-bin slope " +
              fmt(fits.large_side.slope) + " (band [0.3,0.7]), backward " +
              (backward_constant ? "bit-identical" : "NOT constant")};
}

// ---------------------------------------------------------------------------
// 5. error vs time step, low order: slope ~1 for both methods + flattening
Outcome criterion_dt_low() {
  SweepSpec spec = base_spec(SweptParameter::TimeStep, StepScheme::LowOrder);
  spec.values = decade_ladder(1e-5, 1e-1);
  spec.fixed.n_particles = 20000;
  spec.fixed.n_bins = 20;
  const SweepResult result = run_sweep(spec, lorentz_problem(), lorentz_series());
  const DtFitResult backward =
      fit_dt_scaling(result, Method::Backward, StepScheme::LowOrder);
  const DtFitResult forward =
      fit_dt_scaling(result, Method::Forward, StepScheme::LowOrder);
  const bool slopes_ok =
      backward.prefloor.slope >= 0.7 && backward.prefloor.slope <= 1.3 &&
      forward.prefloor.slope >= 0.7 && forward.prefloor.slope <= 1.3;
  const bool flattening =
      backward.has_subfloor && std::abs(backward.subfloor.slope) < 0.35 &&
      forward.has_subfloor && std::abs(forward.subfloor.slope) < 0.35;
  return {slopes_ok && flattening,
          "backward slope " + fmt(backward.prefloor.slope) + ", forward slope " +
              fmt(forward.prefloor.slope) +
              " (band [0.7,1.3]); sub-floor slopes " +
              fmt(backward.has_subfloor ? backward.subfloor.slope : 99.0) +
              " / " + fmt(forward.has_subfloor ? forward.subfloor.slope : 99.0) +
              " (|.| < 0.35)"};
}

// ---------------------------------------------------------------------------
// 6. error vs time step, high order: backward ~3/2, forward does not converge
Outcome criterion_dt_high() {
  SweepSpec spec = base_spec(SweptParameter::TimeStep, StepScheme::HighOrder);
  spec.values = decade_ladder(1e-5, 1e-1);
  spec.fixed.n_particles = 20000;
  spec.fixed.n_bins = 20;
  const SweepResult result = run_sweep(spec, lorentz_problem(), lorentz_series());
  const DtFitResult backward =
      fit_dt_scaling(result, Method::Backward, StepScheme::HighOrder);
  // "does not converge": the forward error shows no usable dt trend over
  // the whole ladder, so the fit runs with no floor exclusion.
  const SlopeFit forward = fit_slope(
      select_points(result, Method::Forward, StepScheme::HighOrder, false));
  const bool pass = backward.prefloor.slope >= 1.2 &&
                    backward.prefloor.slope <= 1.8 && forward.slope < 0.3;
  return {pass, "backward slope " + fmt(backward.prefloor.slope) +
                    " (band [1.2,1.8], " +
                    std::to_string(backward.prefloor.n_points_used) +
                    " pts), forward slope " + fmt(forward.slope) +
                    " (limit < 0.3)"};
}

// ---------------------------------------------------------------------------
// 7. tail reproduction on [0.98, 1]
Outcome criterion_tail() {
  const auto& problem = lorentz_problem();
  const auto& series = lorentz_series();
  const auto& phi = lorentz_phi();

  // Forward run, Phi-sampled launches, 20 bins across the readout window.
  ForwardOptions opt;
  opt.launch = LaunchKind::SampledFromPhi;
  opt.bin_lo = 0.98;
  opt.bin_hi = 1.0;
  opt.n_workers = g_threads;
  const TimeGrid coarse(0.1, 1e-2);
  const BinnedSolution sol = solve_forward(
      problem.model, phi, coarse, StepScheme::LowOrder, 200000, 20, kSeed, opt);
  const bool outermost_empty = sol.counts.back() == 0;
  const bool reads_zero = eval_binned(sol, sol.center(sol.n_bins - 1)) == 0.0;
  int empty_bins = 0;
  for (const auto count : sol.counts) {
    if (count == 0) ++empty_bins;
  }

  // Backward grid on the same points; no empty-bin pathology exists there.
  std::vector<double> queries;
  for (int c = 0; c < sol.n_bins; ++c) queries.push_back(sol.center(c));
  const TimeGrid fine(0.1, 1e-4);
  const auto estimates =
      solve_backward_grid(problem.model, phi, queries, fine,
                          StepScheme::LowOrder, 20000, kSeed, g_threads);
  bool backward_ok = true;
  double worst_sigma = 0.0;
  for (const PointEstimate& est : estimates) {
    const double exact = analytic_solution(problem, series, est.x_query, 0.1);
    const double sigmas = std::abs(est.value - exact) / est.std_error;
    worst_sigma = std::max(worst_sigma, sigmas);
    backward_ok = backward_ok && sigmas <= 5.0 && est.value != 0.0;
  }
  return {outermost_empty && reads_zero && backward_ok,
          "forward: outermost bin " +
              std::string(outermost_empty ? "empty" : "NOT empty") + " (" +
              std::to_string(empty_bins) +
              "/20 bins empty); backward: worst deviation " + fmt(worst_sigma) +
              " std errors (limit 5), no zero estimates"};
}

// ---------------------------------------------------------------------------
// 8. Ito integral identity and partition convergence
Outcome criterion_wiener() {
  RandomStream stream(kSeed, 0);
  const auto stats = wiener_integral_statistic(1.0, 1024, 10000, stream);
  const double sample_std = std::sqrt(std::max(
      0.0,
      stats.rms_error * stats.rms_error - stats.mean_error * stats.mean_error));
  const double limit = 3.0 * sample_std / 100.0;
  RandomStream coarse_stream(kSeed, 1);
  RandomStream fine_stream(kSeed, 2);
  const auto coarse = wiener_integral_statistic(1.0, 64, 10000, coarse_stream);
  const auto fine = wiener_integral_statistic(1.0, 4096, 10000, fine_stream);
  const bool pass =
      std::abs(stats.mean_error) < limit && fine.rms_error < coarse.rms_error;
  return {pass, "|mean error| " + fmt(std::abs(stats.mean_error)) + " < " +
                    fmt(limit) + "; rms " + fmt(coarse.rms_error) + " (64) -> " +
                    fmt(fine.rms_error) + " (4096)"};
}

// ---------------------------------------------------------------------------
// 9. bit-identical output across 1, 2 and 8 workers
Outcome criterion_determinism() {
  const auto& problem = lorentz_problem();
  const auto& phi = lorentz_phi();
  const TimeGrid grid(0.01, 1e-3);
  bool pass = true;

  ForwardOptions base;
  base.n_workers = 1;
  const BinnedSolution ref = solve_forward(problem.model, phi, grid,
                                           StepScheme::LowOrder, 20000, 20,
                                           kSeed, base);
  const PointEstimate ref_b = solve_backward(problem.model, phi, -0.9, grid,
                                             StepScheme::LowOrder, 20000, kSeed,
                                             1);
  for (const int workers : {2, 8}) {
    ForwardOptions opt;
    opt.n_workers = workers;
    const BinnedSolution sol = solve_forward(problem.model, phi, grid,
                                             StepScheme::LowOrder, 20000, 20,
                                             kSeed, opt);
    pass = pass && sol.weight_sums == ref.weight_sums && sol.counts == ref.counts;
    const PointEstimate est = solve_backward(problem.model, phi, -0.9, grid,
                                             StepScheme::LowOrder, 20000, kSeed,
                                             workers);
    pass = pass && est.value == ref_b.value && est.std_error == ref_b.std_error;
  }

  SweepSpec spec;
  spec.swept = SweptParameter::ParticleCount;
  spec.values = {5000.0};
  spec.fixed.dt = 1e-3;
  spec.n_repeats = 2;
  spec.master_seed = kSeed;
  spec.n_workers = 1;
  const SweepResult row_ref = run_sweep(spec, lorentz_problem(), lorentz_series());
  spec.n_workers = 8;
  const SweepResult row_par = run_sweep(spec, lorentz_problem(), lorentz_series());
  for (std::size_t i = 0; i < row_ref.rows.size(); ++i) {
    pass = pass && row_ref.rows[i].epsilon == row_par.rows[i].epsilon;
  }
  return {pass, pass ? "forward, backward and sweep outputs identical at 1/2/8 workers"
                     : "outputs differ across worker counts"};
}

// ---------------------------------------------------------------------------
// 10. property suite from the module invariants
Outcome criterion_properties() {
  const auto& problem = lorentz_problem();
  const auto& series = lorentz_series();
  const auto& phi = lorentz_phi();
  std::string failures;

  {  // scheme coincidence, bitwise
    RandomStream s(kSeed, 100);
    for (int i = 0; i < 2000; ++i) {
      const double x = 1.9 * s.uniform() - 0.95;
      const double dt = 1e-4 + s.uniform() * 0.05;
      const double z = s.gaussian();
      const double low = step_low(x, problem.model, dt, z);
      const double corr = 0.5 * (z * z - 1.0) * problem.model.drift(x) * dt;
      if (step_high(x, problem.model, dt, z) != low + corr) {
        failures += " scheme-coincidence;";
        break;
      }
    }
  }
  {  // deposition conservation
    const TimeGrid grid(0.02, 1e-3);
    const std::int64_t n = 20000;
    ForwardOptions opt;
    opt.n_workers = g_threads;
    const BinnedSolution sol = solve_forward(problem.model, phi, grid,
                                             StepScheme::LowOrder, n, 20, kSeed,
                                             opt);
    double total = 0.0;
    for (const double w : sol.weight_sums) total += w;
    double launched = 0.0;
    for (const double x : launch_points(n, -1.0, 1.0)) launched += phi(x);
    if (std::abs(total - launched) > 1e-10 * launched) {
      failures += " deposition-conservation;";
    }
  }
  {  // t = 0 forward consistency
    const TimeGrid grid(0.0, 1e-3);
    ForwardOptions opt;
    opt.n_workers = g_threads;
    const BinnedSolution sol = solve_forward(problem.model, phi, grid,
                                             StepScheme::LowOrder, 100000, 20,
                                             kSeed, opt);
    for (int c = 0; c < sol.n_bins; ++c) {
      if (std::abs(sol.estimate(c) - phi(sol.center(c))) >= 1e-2) {
        failures += " t0-consistency;";
        break;
      }
    }
  }
  {  // backward T = 0 exactness
    const TimeGrid grid(0.0, 1e-3);
    const PointEstimate est = solve_backward(problem.model, phi, -0.33, grid,
                                             StepScheme::LowOrder, 1000, kSeed);
    if (est.value != phi(-0.33) || est.std_error != 0.0) {
      failures += " backward-t0;";
    }
  }
  {  // Legendre parity
    RandomStream s(kSeed, 101);
    for (int i = 0; i < 500; ++i) {
      const int ell = static_cast<int>(s.next_u64() % 40);
      const double x = 2.0 * s.uniform() - 1.0;
      const double sign = ell % 2 == 0 ? 1.0 : -1.0;
      if (std::abs(legendre_eval(ell, -x) - sign * legendre_eval(ell, x)) >
          1e-11) {
        failures += " legendre-parity;";
        break;
      }
    }
  }
  {  // semigroup
    const LorentzProblem shifted(-0.9, 0.1 + 0.04);
    const LegendreSeries shifted_series = LegendreSeries::for_problem(shifted);
    for (const double x : {-0.95, -0.2, 0.5, 0.99}) {
      if (std::abs(analytic_solution(problem, series, x, 0.04 + 0.06) -
                   analytic_solution(shifted, shifted_series, x, 0.06)) >
          1e-12) {
        failures += " semigroup;";
        break;
      }
    }
  }
  {  // normalization at T = 0.1 by Simpson quadrature
    const int n = 4096;
    const double h = 2.0 / n;
    double acc = analytic_solution(problem, series, -1.0, 0.1) +
                 analytic_solution(problem, series, 1.0, 0.1);
    for (int k = 1; k < n; ++k) {
      acc += (k % 2 == 1 ? 4.0 : 2.0) *
             analytic_solution(problem, series, -1.0 + k * h, 0.1);
    }
    if (std::abs(acc * h / 3.0 - 1.0) > 1e-8) failures += " normalization;";
  }

  if (failures.empty()) {
    return {true,
            "scheme coincidence, deposition conservation, t0 consistency, "
            "backward exactness, parity, semigroup, normalization all hold"};
  }
  return {false, "failed:" + failures};
}

struct Entry {
  int id;
  const char* name;
  Outcome (*run)();
};

constexpr Entry kEntries[] = {
    {1, "oracle-agreement", criterion_oracle_agreement},
    {2, "backward-correctness", criterion_backward_correctness},
    {3, "n-scaling", criterion_n_scaling},
    {4, "nbin-scaling", criterion_nbin_scaling},
    {5, "dt-scaling-low", criterion_dt_low},
    {6, "dt-scaling-high", criterion_dt_high},
    {7, "tail-reproduction", criterion_tail},
    {8, "ito-identity", criterion_wiener},
    {9, "determinism", criterion_determinism},
    {10, "property-suite", criterion_properties},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) {
    if (std::strcmp(argv[a], "--threads") == 0 && a + 1 < argc) {
      g_threads = std::atoi(argv[++a]);
    } else {
      selected.push_back(std::atoi(argv[a]));
    }
  }

  int failed = 0;
  int ran = 0;
  for (const Entry& entry : kEntries) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), entry.id) == selected.end()) {
      continue;
    }
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%s] C%d %s: %s  [%.1fs]\n", outcome.pass ? "PASS" : "FAIL",
                entry.id, entry.name, outcome.detail.c_str(), secs);
    std::fflush(stdout);
    if (!outcome.pass) ++failed;
  }
  std::printf("acceptance: %d/%d criteria passed\n", ran - failed, ran);
  return failed;
}
