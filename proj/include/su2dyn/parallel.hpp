#pragma once

// Deterministic grid parallelism.  Work is split into contiguous index
// ranges, one per worker thread, and every per-index result is written to a
// slot owned by that index.  Reductions over the result arrays then run
// sequentially in a fixed pairwise order, so outputs are bit-identical for
// any thread count.

#include <atomic>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace su2dyn::parallel {

inline std::atomic<int>& thread_setting() {
  static std::atomic<int> n{1};
  return n;
}

inline void set_threads(int n) { thread_setting().store(n < 1 ? 1 : n); }

inline int threads() { return thread_setting().load(); }

// Calls f(i) exactly once for every i in [0, n).  f must only touch state
// owned by index i; there is no synchronization beyond thread join.
template <class F>
void for_each_index(std::size_t n, F&& f) {
  const int t = threads();
  if (t <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(t), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers;
    const std::size_t hi = n * (w + 1) / workers;
    pool.emplace_back([lo, hi, &f] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Pairwise (cascade) summation.  The reduction tree depends only on the
// length of the input, never on the thread count.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double pairwise_mean(std::span<const double> xs) {
  return xs.empty() ? 0.0 : pairwise_sum(xs) / static_cast<double>(xs.size());
}

}  // namespace su2dyn::parallel
