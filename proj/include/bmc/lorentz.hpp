#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmc/model.hpp"

namespace bmc {

/// Lorentz pitch-angle scattering benchmark: initial condition peaked at
/// x0, pre-smoothed over time T0 so the Legendre series converges.
struct LorentzProblem {
  double x0;
  double T0;
  LorentzModel model;

  LorentzProblem(double x0_in, double t0_in,
                 BoundaryPolicy policy = BoundaryPolicy::Reflect)
      : x0(x0_in), T0(t0_in) {
    if (!(x0 > -1.0 && x0 < 1.0)) {
      throw std::invalid_argument("LorentzProblem: x0 must lie in (-1, 1)");
    }
    if (!(T0 > 0.0)) {
      throw std::invalid_argument("LorentzProblem: T0 must be positive");
    }
    model.boundary = policy;
  }
};

/// Truncation of the Legendre eigenfunction series.  max_ell is chosen so
/// the term bound (l + 1/2) exp(-l(l+1) T0) drops below term_tolerance
/// (|P_l| <= 1 on [-1, 1]); for T0 = 0.1 and tolerance 1e-12 this gives
/// max_ell = 17.
struct LegendreSeries {
  int max_ell;
  double term_tolerance;

  static LegendreSeries for_problem(const LorentzProblem& problem,
                                    double tolerance = 1e-12) {
    if (!(tolerance > 0.0)) {
      throw std::invalid_argument("LegendreSeries: tolerance must be > 0");
    }
    for (int ell = 1; ell < 100000; ++ell) {
      const double bound =
          (ell + 0.5) * std::exp(-static_cast<double>(ell) * (ell + 1) * problem.T0);
      if (bound < tolerance) return {ell, tolerance};
    }
    throw std::invalid_argument(
        "LegendreSeries: T0 too small for a finite truncation");
  }
};

/// P_ell(x) by the three-term recurrence
/// (l+1) P_{l+1} = (2l+1) x P_l - l P_{l-1}.
inline double legendre_eval(int ell, double x) {
  if (ell < 0) throw std::invalid_argument("legendre_eval: ell must be >= 0");
  if (!(x >= -1.0 && x <= 1.0)) {
    throw std::invalid_argument("legendre_eval: x outside [-1, 1]");
  }
  if (ell == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int l = 1; l < ell; ++l) {
    const double next = ((2 * l + 1) * x * cur - l * prev) / (l + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Evaluates f(x, T) = sum (l+1/2) P_l(x0) P_l(x) exp(-l(l+1)(T0+T)) with
/// the mode amplitudes precomputed, so repeated evaluation (one call per
/// trajectory endpoint) costs a single Legendre recurrence.
class SeriesEvaluator {
 public:
  SeriesEvaluator(const LorentzProblem& problem, const LegendreSeries& series,
                  double T)
      : coef_(static_cast<std::size_t>(series.max_ell) + 1) {
    if (!(T >= 0.0)) {
      throw std::invalid_argument("SeriesEvaluator: T must be >= 0");
    }
    const double tau = problem.T0 + T;
    double prev = 1.0;
    double cur = problem.x0;
    for (int l = 0; l <= series.max_ell; ++l) {
      const double p0 = l == 0 ? 1.0 : cur;
      coef_[static_cast<std::size_t>(l)] =
          (l + 0.5) * p0 * std::exp(-static_cast<double>(l) * (l + 1) * tau);
      if (l >= 1) {
        const double next = ((2 * l + 1) * problem.x0 * cur - l * prev) / (l + 1);
        prev = cur;
        cur = next;
      }
    }
  }

  double operator()(double x) const {
    if (!(x >= -1.0 && x <= 1.0)) {
      throw std::invalid_argument("SeriesEvaluator: x outside [-1, 1]");
    }
    double sum = coef_[0];
    if (coef_.size() == 1) return sum;
    double prev = 1.0;
    double cur = x;
    sum += coef_[1] * cur;
    for (std::size_t l = 1; l + 1 < coef_.size(); ++l) {
      const double dl = static_cast<double>(l);
      const double next = ((2.0 * dl + 1.0) * x * cur - dl * prev) / (dl + 1.0);
      prev = cur;
      cur = next;
      sum += coef_[l + 1] * cur;
    }
    return sum;
  }

  int terms() const { return static_cast<int>(coef_.size()); }

 private:
  std::vector<double> coef_;
};

/// Exact solution of the Lorentz equation at time T >= 0.
inline double analytic_solution(const LorentzProblem& problem,
                                const LegendreSeries& series, double x,
                                double T) {
  return SeriesEvaluator(problem, series, T)(x);
}

/// Phi(x) = f(x, 0); this is the initial condition consumed by both the
/// forward and the backward solver.  Always evaluated through the series,
/// never tabulated, so trajectory endpoints see no interpolation error.
inline double initial_condition(const LorentzProblem& problem,
                                const LegendreSeries& series, double x) {
  return analytic_solution(problem, series, x, 0.0);
}

}  // namespace bmc
