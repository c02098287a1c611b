#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace bmc {

/// What happens to a trajectory that steps past the domain edge.
enum class BoundaryPolicy { Reflect, Clamp };

/// Order of the stochastic difference equation of motion.
enum class StepScheme { LowOrder, HighOrder };

/// Uniform time discretisation of [0, T].  Construction rejects (T, dt)
/// pairs where T/dt is not an integer within 1e-12 relative tolerance;
/// silently shortening the last step would contaminate error scalings.
/// A zero horizon (n_steps = 0) is the degenerate grid used by the
/// T = 0 identities.
struct TimeGrid {
  double horizon = 0.0;
  double dt = 0.0;
  std::int64_t n_steps = 0;

  TimeGrid(double horizon_t, double dt_in) : horizon(horizon_t), dt(dt_in) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      throw std::invalid_argument("TimeGrid: dt must be positive and finite");
    }
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
      throw std::invalid_argument("TimeGrid: horizon must be non-negative");
    }
    n_steps = static_cast<std::int64_t>(std::llround(horizon / dt));
    const double recon = static_cast<double>(n_steps) * dt;
    const double scale = std::max(horizon, dt);
    if (std::abs(recon - horizon) > 1e-12 * scale) {
      throw std::invalid_argument(
          "TimeGrid: horizon is not an integer multiple of dt (T=" +
          std::to_string(horizon) + ", dt=" + std::to_string(dt) + ")");
    }
  }
};

/// Anything that provides diffusion coefficients on a 1D domain.
template <typename M>
concept ModelLike = requires(const M& m, double x) {
  { m.diffusion(x) } -> std::convertible_to<double>;
  { m.drift(x) } -> std::convertible_to<double>;
  { m.noise_scale(x) } -> std::convertible_to<double>;
  { m.domain_lo } -> std::convertible_to<double>;
  { m.domain_hi } -> std::convertible_to<double>;
  { m.boundary } -> std::convertible_to<BoundaryPolicy>;
};

/// Generic coefficient triple D(x), mu(x) = D'(x), sigma(x) = sqrt(2 D(x)).
/// The callables are user-supplied; validate_coefficients() checks the
/// consistency relations on a probe grid.
struct DiffusionModel {
  double domain_lo = -1.0;
  double domain_hi = 1.0;
  std::function<double(double)> D;
  std::function<double(double)> mu;
  std::function<double(double)> sigma;
  BoundaryPolicy boundary = BoundaryPolicy::Reflect;

  double diffusion(double x) const { return D(x); }
  double drift(double x) const { return mu(x); }
  double noise_scale(double x) const { return sigma(x); }
};

/// Pitch-angle scattering operator: D = (1+x)(1-x) on [-1, 1].
struct LorentzModel {
  double domain_lo = -1.0;
  double domain_hi = 1.0;
  BoundaryPolicy boundary = BoundaryPolicy::Reflect;

  double diffusion(double x) const { return (1.0 + x) * (1.0 - x); }
  double drift(double x) const { return -2.0 * x; }
  double noise_scale(double x) const {
    return std::sqrt(std::max(0.0, 2.0 * (1.0 + x) * (1.0 - x)));
  }
};

/// Checks D >= 0, sigma^2 = 2D (relative 1e-12) and mu against a centered
/// finite difference of D (1e-6) at interior probe points.  Throws
/// std::invalid_argument with the first violation.
template <ModelLike M>
void validate_coefficients(const M& model, int n_probe = 101,
                           double mu_rtol = 1e-6, double sigma_rtol = 1e-12) {
  const double lo = model.domain_lo;
  const double hi = model.domain_hi;
  if (!(lo < hi)) {
    throw std::invalid_argument("model: domain_lo must be below domain_hi");
  }
  const double width = hi - lo;
  const double h = width * 1e-6;
  for (int k = 1; k < n_probe - 1; ++k) {
    const double x = lo + width * static_cast<double>(k) / (n_probe - 1);
    const double d = model.diffusion(x);
    if (!(d >= 0.0)) {
      throw std::invalid_argument("model: D(x) < 0 at x=" + std::to_string(x));
    }
    const double s = model.noise_scale(x);
    if (std::abs(s * s - 2.0 * d) > sigma_rtol * std::max(1.0, 2.0 * d)) {
      throw std::invalid_argument("model: sigma(x)^2 != 2 D(x) at x=" +
                                  std::to_string(x));
    }
    const double fd = (model.diffusion(x + h) - model.diffusion(x - h)) / (2.0 * h);
    const double mu = model.drift(x);
    if (std::abs(fd - mu) > mu_rtol * std::max(1.0, std::abs(mu))) {
      throw std::invalid_argument("model: mu(x) != dD/dx at x=" +
                                  std::to_string(x));
    }
  }
}

}  // namespace bmc
