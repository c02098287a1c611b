#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bmc/forward.hpp"
#include "bmc/lorentz.hpp"
#include "bmc/model.hpp"

namespace bmc {

enum class SweptParameter { ParticleCount, BinCount, TimeStep };
enum class Method { Forward, Backward };

const char* to_string(Method m);
const char* to_string(StepScheme s);
const char* to_string(SweptParameter p);

/// Parameters held fixed while one of them is swept.  The swept dimension's
/// entry here is ignored (the sweep values replace it row by row).
struct SweepFixed {
  std::int64_t n_particles = 20000;
  int n_bins = 20;
  double dt = 1e-4;
  double horizon = 0.1;
  double x_query = -0.9;
  std::vector<Method> methods = {Method::Forward, Method::Backward};
  std::vector<StepScheme> schemes = {StepScheme::LowOrder};
  LaunchKind launch = LaunchKind::MidpointGrid;
};

struct SweepSpec {
  SweptParameter swept = SweptParameter::ParticleCount;
  std::vector<double> values;
  SweepFixed fixed;
  // Independent master seeds (master_seed + r) averaged per row to make
  // slope tests stable at desk scale; 1 reproduces single-run output.
  int n_repeats = 8;
  std::uint64_t master_seed = 1;
  int n_workers = 0;
};

struct SweepRow {
  double param = 0.0;
  Method method = Method::Forward;
  StepScheme scheme = StepScheme::LowOrder;
  double epsilon = 0.0;    // mean local relative error over the repeats
  double std_error = 0.0;  // spread of the per-repeat errors / sqrt(repeats)
  double seconds = 0.0;
  double stat_se = 0.0;    // backward only: mean estimator SE / exact
  int n_zero_estimates = 0;
  bool ok = true;
  std::string message;
};

struct SweepResult {
  SweepSpec spec;
  double exact = 0.0;  // analytic f(x_query, T), the error reference
  std::vector<SweepRow> rows;
};

/// Local relative error |estimate - exact| / exact; requires exact > 0.
double relative_error(double estimate, double exact);

struct SweepPoint {
  double param = 0.0;
  double eps = 0.0;
};

struct FitOptions {
  double min_eps = 0.0;
  double max_eps = std::numeric_limits<double>::infinity();
  double min_param = -std::numeric_limits<double>::infinity();
  double max_param = std::numeric_limits<double>::infinity();
  // Drop eps == 1 exactly: the empty-bin saturation value of the forward
  // method (a zero estimate against a positive reference).
  bool drop_saturated = true;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  int n_points_used = 0;
  std::vector<int> excluded_indices;
};

/// Ordinary least squares on (log10 param, log10 eps) after applying the
/// exclusion options.  Throws if fewer than two points survive.
SlopeFit fit_slope(std::span<const SweepPoint> points,
                   const FitOptions& options = {});

/// 1-2-5 pattern ladder covering [lo, hi], e.g. 1e-5, 2e-5, 5e-5, ..., 1e-1.
std::vector<double> decade_ladder(double lo, double hi);

/// Runs the requested sweep against the Lorentz benchmark.  Rows appear in
/// deterministic (value, method, scheme) order; per-row failures are
/// recorded without aborting the sweep.
SweepResult run_sweep(const SweepSpec& spec, const LorentzProblem& problem,
                      const LegendreSeries& series);

std::vector<SweepPoint> select_points(const SweepResult& result, Method method,
                                      StepScheme scheme,
                                      bool drop_zero_estimate_rows);

/// Slope of the error against particle count.  Forward rows containing an
/// exactly-zero estimate in any repeat (empty bins at the query point) are
/// excluded, mirroring the saturation exclusion for single runs.
SlopeFit fit_n_scaling(const SweepResult& result, Method method,
                       StepScheme scheme);

struct NbinFits {
  SlopeFit small_side;  // bin-size error regime, expected slope near -2
  SlopeFit large_side;  // statistical regime, expected slope near +1/2
  int argmin_index = 0;
};

/// Splits the forward bin-count sweep at the error minimum and fits both
/// regimes.  Points on the small side with eps >= 0.5 are outside the
/// quadratic-interpolation asymptote (one bin spanning most of the domain)
/// and are dropped.
NbinFits fit_nbin_scaling(const SweepResult& result, StepScheme scheme);

struct DtFitResult {
  SlopeFit prefloor;
  double floor_threshold = 0.0;
  double eps_cap = std::numeric_limits<double>::infinity();
  SlopeFit subfloor;
  bool has_subfloor = false;
};

/// Fits the time-step scaling over the trusted window of the ladder.
///
/// Lower edge: points must exceed three times the statistical floor.  For
/// the backward method the floor is its own mean standard error at the
/// smallest dt; the forward estimator carries no standard error, so its
/// floor is the measured error averaged over the three smallest dt values
/// (pure bin + statistics there).
///
/// Upper edge (backward only): relative errors beyond 0.08 come from one-
/// or two-step trajectories outside the asymptotic regime and flatten the
/// fitted exponent, so they are excluded; the forward error stays on its
/// power law up to O(1) and gets no cap.
///
/// Points below the lower edge form the sub-floor set; their own fit
/// quantifies the flattening once statistics dominate.
DtFitResult fit_dt_scaling(const SweepResult& result, Method method,
                           StepScheme scheme);

}  // namespace bmc
