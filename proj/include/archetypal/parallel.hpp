#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace archetypal {

/// workers <= 0 means "use hardware concurrency".
inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs body(i) for i in [0, n). Each index is visited exactly once; the
/// caller must make iterations independent (e.g. write to slot i only).
/// The first exception thrown by any worker is rethrown on the caller.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  const std::size_t w = static_cast<std::size_t>(resolve_workers(workers));
  if (n == 0) return;
  if (w <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t nthreads = std::min(w, n);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    threads.emplace_back([&, t] {
      const std::size_t lo = n * t / nthreads;
      const std::size_t hi = n * (t + 1) / nthreads;
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Chunk width used by deterministic reductions. Partial results are computed
/// per fixed chunk and folded in chunk order, so sums do not depend on the
/// worker count.
inline constexpr std::size_t kReductionChunk = 4096;

/// Deterministic map-reduce over [0, n): `chunk_fn(lo, hi, partial)` fills the
/// partial for one chunk, `combine(acc, partial)` folds partials in order.
template <typename Partial, typename ChunkFn, typename CombineFn>
Partial chunked_reduce(std::size_t n, int workers, ChunkFn chunk_fn, CombineFn combine,
                       Partial init) {
  const std::size_t nchunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<Partial> partials(nchunks);
  parallel_for(nchunks, workers, [&](std::size_t c) {
    const std::size_t lo = c * kReductionChunk;
    const std::size_t hi = std::min(n, lo + kReductionChunk);
    chunk_fn(lo, hi, partials[c]);
  });
  Partial acc = init;
  for (std::size_t c = 0; c < nchunks; ++c) combine(acc, partials[c]);
  return acc;
}

}  // namespace archetypal
