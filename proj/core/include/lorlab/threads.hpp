#pragma once

// Minimal fork-join helper. Thread count comes from LORLAB_THREADS when set,
// otherwise hardware concurrency capped at 8.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace lorlab {

inline int thread_count() {
  if (const char* env = std::getenv("LORLAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return std::min(n, 64);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return int(std::clamp<unsigned>(hw == 0 ? 1 : hw, 1, 8));
}

// Run fn(begin..end) split into contiguous chunks across workers. Falls back
// to a direct call when a single thread suffices or the range is small.
inline void parallel_chunks(int begin, int end,
                            const std::function<void(int, int)>& fn) {
  int n = end - begin;
  int workers = thread_count();
  if (workers <= 1 || n < 2 * workers) {
    if (n > 0) fn(begin, end);
    return;
  }
  std::vector<std::thread> pool;
  int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    int lo = begin + w * chunk;
    int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace lorlab
