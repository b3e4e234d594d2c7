#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace anchorfair {

// Splits [0, n) into contiguous chunks and runs fn(begin, end) on each, one
// chunk per worker. Chunks are disjoint, so fn may write to per-index state
// without synchronization; results are deterministic regardless of the
// worker count. threads <= 0 means hardware concurrency.
inline void parallel_for(long long n,
                         const std::function<void(long long, long long)>& fn,
                         int threads = 0) {
  if (n <= 0) return;
  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers > n) workers = static_cast<int>(n);
  if (workers == 1) {
    fn(0, n);
    return;
  }
  const long long chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const long long begin = w * chunk;
    const long long end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace anchorfair
