#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bmc/model.hpp"

namespace bmc {

/// Cell-centered finite-difference solution.  Centers sit strictly inside
/// the open domain, so degenerate endpoints (D(+-1) = 0 for Lorentz) are
/// never evaluated as cell nodes.
struct FdGrid {
  std::int64_t n_cells = 0;
  double dx = 0.0;
  double dt_fd = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> values;

  double center(std::int64_t c) const {
    return lo + (static_cast<double>(c) + 0.5) * dx;
  }
  double mass() const {
    double m = 0.0;
    for (const double v : values) m += v;
    return m * dx;
  }
};

/// Crank-Nicolson solve of df/dt = d/dx D df/dx in conservative form with
/// zero-flux boundaries (the boundary face transmissibilities are set to
/// zero; for Lorentz D already vanishes there).  Second order in space and
/// time; the per-step tridiagonal system is eliminated by a Thomas sweep
/// whose pivots are precomputed once since the matrix is time-independent.
/// Serves as the independent truth source for the analytic series.
template <ModelLike M, typename Phi>
FdGrid solve_fd(const M& model, Phi&& phi, double T, std::int64_t n_cells,
                double dt_fd) {
  if (n_cells < 2) {
    throw std::invalid_argument("solve_fd: need at least two cells");
  }
  if (!(dt_fd > 0.0) || !std::isfinite(dt_fd)) {
    throw std::invalid_argument("solve_fd: dt_fd must be positive");
  }
  if (!(T >= 0.0)) {
    throw std::invalid_argument("solve_fd: T must be >= 0");
  }
  const std::int64_t n_steps =
      static_cast<std::int64_t>(std::llround(T / dt_fd));
  if (std::abs(static_cast<double>(n_steps) * dt_fd - T) >
      1e-9 * std::max(T, dt_fd)) {
    throw std::invalid_argument("solve_fd: T must be a multiple of dt_fd");
  }

  FdGrid grid;
  grid.n_cells = n_cells;
  grid.lo = model.domain_lo;
  grid.hi = model.domain_hi;
  grid.dx = (grid.hi - grid.lo) / static_cast<double>(n_cells);
  grid.dt_fd = dt_fd;
  const std::size_t n = static_cast<std::size_t>(n_cells);

  grid.values.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    grid.values[c] = phi(grid.center(static_cast<std::int64_t>(c)));
  }
  if (n_steps == 0) return grid;

  // Face diffusivities; zero-flux boundaries.
  std::vector<double> face(n + 1, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    face[j] = model.diffusion(grid.lo + static_cast<double>(j) * grid.dx);
  }
  face[0] = 0.0;
  face[n] = 0.0;

  const double r = dt_fd / (2.0 * grid.dx * grid.dx);
  // Implicit matrix (I - r A): sub = -r D_{c-1/2}, sup = -r D_{c+1/2},
  // diag = 1 + r (D_{c-1/2} + D_{c+1/2}).
  std::vector<double> diag(n), sub(n), sup(n);
  for (std::size_t c = 0; c < n; ++c) {
    sub[c] = -r * face[c];
    sup[c] = -r * face[c + 1];
    diag[c] = 1.0 + r * (face[c] + face[c + 1]);
  }

  // Thomas elimination factors, computed once.
  std::vector<double> cprime(n, 0.0), inv_piv(n, 0.0);
  double piv = diag[0];
  if (std::abs(piv) < 1e-300) {
    throw std::runtime_error("solve_fd: singular tridiagonal system");
  }
  inv_piv[0] = 1.0 / piv;
  cprime[0] = sup[0] * inv_piv[0];
  for (std::size_t c = 1; c < n; ++c) {
    piv = diag[c] - sub[c] * cprime[c - 1];
    if (std::abs(piv) < 1e-300) {
      throw std::runtime_error("solve_fd: singular tridiagonal system");
    }
    inv_piv[c] = 1.0 / piv;
    cprime[c] = sup[c] * inv_piv[c];
  }

  std::vector<double> rhs(n), work(n);
  std::vector<double>& f = grid.values;
  for (std::int64_t step = 0; step < n_steps; ++step) {
    for (std::size_t c = 0; c < n; ++c) {
      double v = (1.0 - r * (face[c] + face[c + 1])) * f[c];
      if (c > 0) v += r * face[c] * f[c - 1];
      if (c + 1 < n) v += r * face[c + 1] * f[c + 1];
      rhs[c] = v;
    }
    work[0] = rhs[0] * inv_piv[0];
    for (std::size_t c = 1; c < n; ++c) {
      work[c] = (rhs[c] - sub[c] * work[c - 1]) * inv_piv[c];
    }
    f[n - 1] = work[n - 1];
    for (std::size_t c = n - 1; c-- > 0;) {
      f[c] = work[c] - cprime[c] * f[c + 1];
    }
  }
  return grid;
}

/// Linear interpolation between cell centers; constant beyond the
/// outermost centers.
inline double eval_fd(const FdGrid& grid, double x) {
  if (std::isnan(x) || x < grid.lo || x > grid.hi) {
    throw std::invalid_argument("eval_fd: x outside domain");
  }
  const double first = grid.center(0);
  const double last = grid.center(grid.n_cells - 1);
  if (x <= first) return grid.values.front();
  if (x >= last) return grid.values.back();
  auto k = static_cast<std::int64_t>((x - first) / grid.dx);
  if (k > grid.n_cells - 2) k = grid.n_cells - 2;
  const double t = (x - grid.center(k)) / grid.dx;
  return (1.0 - t) * grid.values[static_cast<std::size_t>(k)] +
         t * grid.values[static_cast<std::size_t>(k + 1)];
}

}  // namespace bmc
