#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace bmc {

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Fixed chunk width for deterministic parallel reductions.  Chunk
/// boundaries are a function of the problem size only, never of the worker
/// count, so per-chunk partial results reduced in chunk order are
/// bit-identical for any degree of parallelism.
inline constexpr std::int64_t kParallelChunk = 8192;

inline std::int64_t chunk_count(std::int64_t n) {
  return n <= 0 ? 0 : (n + kParallelChunk - 1) / kParallelChunk;
}

/// Invokes fn(chunk_index, begin, end) for every chunk of [0, n).
/// Workers pull chunks from a shared counter; the first exception thrown
/// by fn is rethrown on the calling thread after all workers join.
template <typename Fn>
void for_each_chunk(std::int64_t n, int n_workers, Fn&& fn) {
  const std::int64_t n_chunks = chunk_count(n);
  if (n_chunks == 0) return;
  const auto run_chunk = [&](std::int64_t c) {
    const std::int64_t begin = c * kParallelChunk;
    const std::int64_t end = std::min(n, begin + kParallelChunk);
    fn(c, begin, end);
  };
  const int workers =
      static_cast<int>(std::min<std::int64_t>(resolve_workers(n_workers), n_chunks));
  if (workers <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
        if (c >= n_chunks) return;
        try {
          run_chunk(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace bmc
