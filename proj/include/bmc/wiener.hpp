#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "bmc/random.hpp"

namespace bmc {

struct WienerIntegralStats {
  double mean_error = 0.0;
  double rms_error = 0.0;
};

/// Monte-Carlo check of the Ito integral identity
///   int_0^t W dW = (W(t)^2 - t) / 2.
/// Each sample builds a discrete Wiener path on n_partitions subintervals,
/// forms the left-point partial sum I_n = sum W(t_k) [W(t_{k+1}) - W(t_k)],
/// and records I_n - (W(t)^2 - t)/2.  Returns the mean and RMS of that
/// error over n_samples paths.
inline WienerIntegralStats wiener_integral_statistic(double t,
                                                     std::int64_t n_partitions,
                                                     std::int64_t n_samples,
                                                     RandomStream& stream) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("wiener_integral_statistic: t must be >= 0");
  }
  if (n_partitions < 1 || n_samples < 1) {
    throw std::invalid_argument(
        "wiener_integral_statistic: counts must be positive");
  }
  if (t == 0.0) return {0.0, 0.0};

  const double dt = t / static_cast<double>(n_partitions);
  const double sqrt_dt = std::sqrt(dt);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    double w = 0.0;
    double integral = 0.0;
    for (std::int64_t k = 0; k < n_partitions; ++k) {
      const double dw = stream.gaussian() * sqrt_dt;
      integral += w * dw;
      w += dw;
    }
    const double err = integral - 0.5 * (w * w - t);
    sum += err;
    sum_sq += err * err;
  }
  const double n = static_cast<double>(n_samples);
  return {sum / n, std::sqrt(sum_sq / n)};
}

}  // namespace bmc
