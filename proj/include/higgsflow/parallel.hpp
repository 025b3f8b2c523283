// Minimal data-parallel helper for pointwise grid kernels. Thread count is
// capped by the HIGGSFLOW_THREADS environment variable; results must not
// depend on the partitioning (disjoint writes only, reductions stay serial),
// so output is bit-identical at any thread count.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hf {

inline int max_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("HIGGSFLOW_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<long>(n, cap);
  }
  return n;
}

// Runs fn(i) for i in [0, n). Small ranges run serially: spawning threads for
// a 32x32 grid costs more than the work itself.
template <class Fn>
void parallel_for(long n, Fn&& fn, long grain = 4096) {
  int threads = max_threads();
  if (threads <= 1 || n < 2 * grain) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  long chunks = std::min<long>(threads, (n + grain - 1) / grain);
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (long c = 0; c < chunks; ++c) {
    long lo = n * c / chunks, hi = n * (c + 1) / chunks;
    pool.emplace_back([lo, hi, &fn] {
      for (long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace hf
