#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bmc/model.hpp"
#include "bmc/parallel.hpp"
#include "bmc/random.hpp"
#include "bmc/stepping.hpp"

namespace bmc {

/// How forward launch points are generated.
///   MidpointGrid   deterministic midpoint grid (default; no launch noise)
///   UniformRandom  uniform random positions, for comparison
///   SampledFromPhi positions sampled from Phi by inverse CDF; reproduces
///                  the tail starvation of density-sampled forward runs
enum class LaunchKind { MidpointGrid, UniformRandom, SampledFromPhi };

/// Histogram of weighted particle arrivals.  Bins span [bin_lo, bin_hi]
/// (the model domain unless a readout window was requested); weight_sums
/// holds the per-bin sums of deposited weights, so the bin-center density
/// estimate is (domain_width / (n_particles * bin_width)) * weight_sums[c].
struct BinnedSolution {
  int n_bins = 0;
  std::vector<double> edges;
  std::vector<double> weight_sums;
  std::vector<std::int64_t> counts;
  std::int64_t n_particles = 0;
  double domain_width = 0.0;
  double bin_lo = 0.0;
  double bin_hi = 0.0;

  double bin_width() const { return (bin_hi - bin_lo) / n_bins; }
  double center(int c) const { return bin_lo + (c + 0.5) * bin_width(); }
  double estimate(int c) const {
    return domain_width /
           (static_cast<double>(n_particles) * bin_width()) *
           weight_sums[static_cast<std::size_t>(c)];
  }
};

struct ForwardOptions {
  LaunchKind launch = LaunchKind::MidpointGrid;
  // Binning window; NaN means the full model domain.
  double bin_lo = std::numeric_limits<double>::quiet_NaN();
  double bin_hi = std::numeric_limits<double>::quiet_NaN();
  int n_workers = 0;
};

/// Deterministic midpoint launch grid x_i = lo + (i - 1/2)(hi - lo)/N.
inline std::vector<double> launch_points(std::int64_t n_particles, double lo,
                                         double hi) {
  if (n_particles < 1) {
    throw std::invalid_argument("launch_points: need at least one particle");
  }
  if (!(lo < hi)) {
    throw std::invalid_argument("launch_points: empty domain");
  }
  std::vector<double> pts(static_cast<std::size_t>(n_particles));
  const double width = hi - lo;
  const double inv_n = 1.0 / static_cast<double>(n_particles);
  for (std::int64_t i = 0; i < n_particles; ++i) {
    pts[static_cast<std::size_t>(i)] =
        lo + (static_cast<double>(i) + 0.5) * width * inv_n;
  }
  return pts;
}

namespace detail {

// Substream id space: trajectory i uses substream i; launch-point draws for
// particle i use substream kLaunchSubstreamBase + i.  Frozen; regression
// fixtures depend on it.
inline constexpr std::uint64_t kLaunchSubstreamBase = 0x8000000000000000ull;

// Piecewise-linear inverse CDF of a non-negative density tabulated on a
// uniform grid over [lo, hi].
class InverseCdf {
 public:
  template <typename Phi>
  InverseCdf(Phi&& phi, double lo, double hi, std::int64_t n_panels)
      : lo_(lo), dx_((hi - lo) / static_cast<double>(n_panels)) {
    cum_.resize(static_cast<std::size_t>(n_panels) + 1, 0.0);
    double prev = std::max(0.0, phi(lo));
    for (std::int64_t p = 1; p <= n_panels; ++p) {
      const double x = lo + dx_ * static_cast<double>(p);
      const double cur = std::max(0.0, phi(x));
      cum_[static_cast<std::size_t>(p)] =
          cum_[static_cast<std::size_t>(p - 1)] + 0.5 * (prev + cur) * dx_;
      prev = cur;
    }
    total_ = cum_.back();
    if (!(total_ > 0.0)) {
      throw std::invalid_argument("solve_forward: Phi integrates to zero");
    }
  }

  double total() const { return total_; }

  double operator()(double u) const {
    const double target = u * total_;
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    std::size_t k = static_cast<std::size_t>(
        std::max<std::ptrdiff_t>(1, it - cum_.begin()));
    k = std::min(k, cum_.size() - 1);
    const double c0 = cum_[k - 1];
    const double c1 = cum_[k];
    const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
    return lo_ + dx_ * (static_cast<double>(k - 1) + frac);
  }

 private:
  double lo_;
  double dx_;
  double total_ = 0.0;
  std::vector<double> cum_;
};

}  // namespace detail

/// Conventional forward weighted Monte-Carlo solve.  Particle i starts at
/// its launch point with deposit weight Phi(X_i(0)) (grid/uniform launch)
/// or integral(Phi)/(domain width) (Phi-sampled launch, which carries the
/// density in the particle positions instead), evolves forward with
/// substream id = i, and deposits into the bin containing its endpoint.
/// Deposition is reduced over fixed-size chunks in chunk order, so the
/// result is bit-identical for any worker count.
template <ModelLike M, typename Phi>
BinnedSolution solve_forward(const M& model, Phi&& phi, const TimeGrid& grid,
                             StepScheme scheme, std::int64_t n_particles,
                             int n_bins, std::uint64_t master_seed,
                             const ForwardOptions& opt = {}) {
  if (n_particles < 1) {
    throw std::invalid_argument("solve_forward: n_particles must be >= 1");
  }
  if (n_bins < 1) {
    throw std::invalid_argument("solve_forward: n_bins must be >= 1");
  }
  const double lo = model.domain_lo;
  const double hi = model.domain_hi;
  const double wlo = std::isnan(opt.bin_lo) ? lo : opt.bin_lo;
  const double whi = std::isnan(opt.bin_hi) ? hi : opt.bin_hi;
  if (!(wlo < whi) || wlo < lo || whi > hi) {
    throw std::invalid_argument(
        "solve_forward: binning window must be a nonempty subinterval of the domain");
  }
  const double width = hi - lo;
  const double bin_w = (whi - wlo) / n_bins;

  // Phi-sampled launches need the inverse CDF and the density integral.
  std::vector<detail::InverseCdf> sampler;
  if (opt.launch == LaunchKind::SampledFromPhi) {
    sampler.emplace_back(phi, lo, hi, 8192);
  }
  const double sampled_weight =
      sampler.empty() ? 0.0 : sampler.front().total() / width;

  struct ChunkBins {
    std::vector<double> weights;
    std::vector<std::int64_t> counts;
  };
  std::vector<ChunkBins> partial(
      static_cast<std::size_t>(chunk_count(n_particles)));

  for_each_chunk(n_particles, opt.n_workers,
                 [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
    ChunkBins local;
    local.weights.assign(static_cast<std::size_t>(n_bins), 0.0);
    local.counts.assign(static_cast<std::size_t>(n_bins), 0);
    for (std::int64_t i = begin; i < end; ++i) {
      double x0 = 0.0;
      switch (opt.launch) {
        case LaunchKind::MidpointGrid:
          x0 = lo + (static_cast<double>(i) + 0.5) * width /
                        static_cast<double>(n_particles);
          break;
        case LaunchKind::UniformRandom: {
          RandomStream ls(master_seed,
                          detail::kLaunchSubstreamBase + static_cast<std::uint64_t>(i));
          x0 = lo + ls.uniform() * width;
          break;
        }
        case LaunchKind::SampledFromPhi: {
          RandomStream ls(master_seed,
                          detail::kLaunchSubstreamBase + static_cast<std::uint64_t>(i));
          x0 = sampler.front()(ls.uniform());
          break;
        }
      }
      const double deposit =
          opt.launch == LaunchKind::SampledFromPhi ? sampled_weight : phi(x0);
      RandomStream stream(master_seed, static_cast<std::uint64_t>(i));
      const double endpoint =
          evolve_trajectory(x0, model, grid, scheme, stream);
      if (endpoint < wlo || endpoint > whi) continue;
      int c = static_cast<int>((endpoint - wlo) / bin_w);
      c = std::clamp(c, 0, n_bins - 1);
      local.weights[static_cast<std::size_t>(c)] += deposit;
      local.counts[static_cast<std::size_t>(c)] += 1;
    }
    partial[static_cast<std::size_t>(chunk)] = std::move(local);
  });

  BinnedSolution sol;
  sol.n_bins = n_bins;
  sol.n_particles = n_particles;
  sol.domain_width = width;
  sol.bin_lo = wlo;
  sol.bin_hi = whi;
  sol.edges.resize(static_cast<std::size_t>(n_bins) + 1);
  for (int e = 0; e <= n_bins; ++e) {
    sol.edges[static_cast<std::size_t>(e)] = wlo + e * bin_w;
  }
  sol.edges.back() = whi;
  sol.weight_sums.assign(static_cast<std::size_t>(n_bins), 0.0);
  sol.counts.assign(static_cast<std::size_t>(n_bins), 0);
  for (const ChunkBins& part : partial) {
    for (int c = 0; c < n_bins; ++c) {
      sol.weight_sums[static_cast<std::size_t>(c)] +=
          part.weights[static_cast<std::size_t>(c)];
      sol.counts[static_cast<std::size_t>(c)] +=
          part.counts[static_cast<std::size_t>(c)];
    }
  }
  return sol;
}

/// Reads the binned solution back at x: linear interpolation between the
/// two nearest bin centers, constant extrapolation outside the outermost
/// centers.  An empty bin contributes exactly zero.
inline double eval_binned(const BinnedSolution& sol, double x) {
  if (std::isnan(x)) {
    throw std::invalid_argument("eval_binned: NaN query");
  }
  const double h = sol.bin_width();
  const double first = sol.center(0);
  const double last = sol.center(sol.n_bins - 1);
  if (sol.n_bins == 1 || x <= first) return sol.estimate(0);
  if (x >= last) return sol.estimate(sol.n_bins - 1);
  int k = static_cast<int>((x - first) / h);
  k = std::clamp(k, 0, sol.n_bins - 2);
  const double t = (x - sol.center(k)) / h;
  return (1.0 - t) * sol.estimate(k) + t * sol.estimate(k + 1);
}

}  // namespace bmc
