#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "bmc/model.hpp"
#include "bmc/parallel.hpp"
#include "bmc/random.hpp"
#include "bmc/stepping.hpp"

namespace bmc {

/// A Feynman-Kac point value with its sample standard error.
struct PointEstimate {
  double x_query = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_particles = 0;
};

namespace detail {

template <ModelLike M, typename Phi>
PointEstimate backward_point(const M& model, Phi&& phi, double x_query,
                             const TimeGrid& grid, StepScheme scheme,
                             std::int64_t n_particles, std::uint64_t master_seed,
                             std::uint64_t substream_base, int n_workers) {
  if (n_particles < 1) {
    throw std::invalid_argument("solve_backward: n_particles must be >= 1");
  }
  if (x_query < model.domain_lo || x_query > model.domain_hi ||
      std::isnan(x_query)) {
    throw std::invalid_argument("solve_backward: query outside domain");
  }

  struct ChunkMoments {
    double sum = 0.0;
    double sum_sq = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
  };
  std::vector<ChunkMoments> partial(
      static_cast<std::size_t>(chunk_count(n_particles)));

  for_each_chunk(n_particles, n_workers,
                 [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
    ChunkMoments local;
    for (std::int64_t i = begin; i < end; ++i) {
      RandomStream stream(master_seed,
                          substream_base + static_cast<std::uint64_t>(i));
      const double endpoint =
          evolve_trajectory(x_query, model, grid, scheme, stream);
      const double w = phi(endpoint);
      local.sum += w;
      local.sum_sq += w * w;
      local.min = std::min(local.min, w);
      local.max = std::max(local.max, w);
    }
    partial[static_cast<std::size_t>(chunk)] = local;
  });

  ChunkMoments total;
  for (const ChunkMoments& part : partial) {
    total.sum += part.sum;
    total.sum_sq += part.sum_sq;
    total.min = std::min(total.min, part.min);
    total.max = std::max(total.max, part.max);
  }

  PointEstimate est;
  est.x_query = x_query;
  est.n_particles = n_particles;
  const double n = static_cast<double>(n_particles);
  if (total.min == total.max) {
    // All endpoint weights equal: the mean is that weight, error-free.
    est.value = total.min;
    est.std_error = 0.0;
    return est;
  }
  est.value = total.sum / n;
  const double var =
      std::max(0.0, (total.sum_sq - n * est.value * est.value) / (n - 1.0));
  est.std_error = std::sqrt(var / n);
  return est;
}

}  // namespace detail

/// Backward Feynman-Kac solve: launches all n_particles from the query
/// point (substream id = i), evolves each for n_steps of the chosen scheme
/// and averages Phi over the endpoints.  No binning and no interpolation
/// exist in this method; the estimate is smooth in Phi.
template <ModelLike M, typename Phi>
PointEstimate solve_backward(const M& model, Phi&& phi, double x_query,
                             const TimeGrid& grid, StepScheme scheme,
                             std::int64_t n_particles, std::uint64_t master_seed,
                             int n_workers = 0) {
  return detail::backward_point(model, phi, x_query, grid, scheme, n_particles,
                                master_seed, 0, n_workers);
}

/// Independent backward solves at each query point.  Query j, particle i
/// draws from substream j*N + i (frozen layout), so grid results are
/// reproducible and per-query independent.
template <ModelLike M, typename Phi>
std::vector<PointEstimate> solve_backward_grid(
    const M& model, Phi&& phi, std::span<const double> x_queries,
    const TimeGrid& grid, StepScheme scheme, std::int64_t n_particles,
    std::uint64_t master_seed, int n_workers = 0) {
  std::vector<PointEstimate> out;
  out.reserve(x_queries.size());
  std::uint64_t base = 0;
  for (const double xq : x_queries) {
    out.push_back(detail::backward_point(model, phi, xq, grid, scheme,
                                         n_particles, master_seed, base,
                                         n_workers));
    base += static_cast<std::uint64_t>(n_particles);
  }
  return out;
}

}  // namespace bmc
