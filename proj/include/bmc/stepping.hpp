#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "bmc/model.hpp"
#include "bmc/random.hpp"

namespace bmc {

/// A single move overshot so far that one reflection could not bring it
/// back inside the domain.  Indicates dt too large for the model.
class StepTooLargeError : public std::runtime_error {
 public:
  explicit StepTooLargeError(const std::string& what)
      : std::runtime_error(what) {}
};

namespace detail {

inline double step_low_kernel(double x, double mu, double sigma, double dt,
                              double sqrt_dt, double zeta) {
  return x + mu * dt + zeta * sigma * sqrt_dt;
}

// Additive correction turning the low-order step into the higher-order one.
// Writing the high-order step as low + correction makes the scheme
// coincidence identity hold bitwise.
inline double high_order_correction(double mu, double dt, double zeta) {
  return 0.5 * (zeta * zeta - 1.0) * mu * dt;
}

template <ModelLike M>
void check_step_inputs(double x, const M& model, double dt, double zeta) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("step: dt must be positive");
  }
  if (std::isnan(x) || std::isnan(zeta)) {
    throw std::invalid_argument("step: NaN input");
  }
  if (x < model.domain_lo || x > model.domain_hi) {
    throw std::invalid_argument("step: x outside domain");
  }
}

}  // namespace detail

/// x + mu(x) dt + zeta sigma(x) sqrt(dt).  Shared by the forward and the
/// backward method; direction of time is pure bookkeeping.
template <ModelLike M>
double step_low(double x, const M& model, double dt, double zeta) {
  detail::check_step_inputs(x, model, dt, zeta);
  return detail::step_low_kernel(x, model.drift(x), model.noise_scale(x), dt,
                                 std::sqrt(dt), zeta);
}

/// x + (1 + zeta^2)/2 mu(x) dt + zeta sigma(x) sqrt(dt).
/// Valid for advection-free problems, where sigma sigma' = mu.
template <ModelLike M>
double step_high(double x, const M& model, double dt, double zeta) {
  detail::check_step_inputs(x, model, dt, zeta);
  const double mu = model.drift(x);
  return detail::step_low_kernel(x, mu, model.noise_scale(x), dt,
                                 std::sqrt(dt), zeta) +
         detail::high_order_correction(mu, dt, zeta);
}

/// Brings an overshoot back inside [domain_lo, domain_hi].  Reflect applies
/// one elastic reflection at the violated edge and signals StepTooLargeError
/// if that does not suffice; Clamp pins to the edge.
template <ModelLike M>
double apply_boundary(double x, const M& model) {
  const double lo = model.domain_lo;
  const double hi = model.domain_hi;
  if (x >= lo && x <= hi) return x;
  if (std::isnan(x)) {
    throw std::invalid_argument("apply_boundary: NaN position");
  }
  if (model.boundary == BoundaryPolicy::Clamp) {
    return x > hi ? hi : lo;
  }
  const double reflected = x > hi ? 2.0 * hi - x : 2.0 * lo - x;
  if (reflected < lo || reflected > hi) {
    throw StepTooLargeError(
        "apply_boundary: overshoot to " + std::to_string(x) +
        " exceeds the domain width; reduce dt");
  }
  return reflected;
}

/// Runs n_steps of the chosen scheme from x_start, applying the boundary
/// policy after every move.  Consumes exactly n_steps deviates from the
/// stream; the endpoint is a pure function of (x_start, model, grid,
/// scheme, stream seed/substream).
template <ModelLike M>
double evolve_trajectory(double x_start, const M& model, const TimeGrid& grid,
                         StepScheme scheme, RandomStream& stream) {
  if (std::isnan(x_start) || x_start < model.domain_lo ||
      x_start > model.domain_hi) {
    throw std::invalid_argument("evolve_trajectory: start outside domain");
  }
  const double dt = grid.dt;
  const double sqrt_dt = std::sqrt(dt);
  const bool high = scheme == StepScheme::HighOrder;
  double x = x_start;
  for (std::int64_t k = 0; k < grid.n_steps; ++k) {
    const double zeta = stream.gaussian();
    const double mu = model.drift(x);
    double moved =
        detail::step_low_kernel(x, mu, model.noise_scale(x), dt, sqrt_dt, zeta);
    if (high) moved += detail::high_order_correction(mu, dt, zeta);
    x = apply_boundary(moved, model);
  }
  return x;
}

}  // namespace bmc
