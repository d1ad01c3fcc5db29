#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rnd {

// Worker count for block-parallel loops; RND_THREADS caps it.
inline int worker_count() {
  if (const char* env = std::getenv("RND_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs fn(begin, end) over a static partition of [0, n) into contiguous
// blocks, one per worker.  Every index is visited exactly once and writers
// must touch disjoint slots per index, so the result is identical to running
// the blocks sequentially regardless of the worker count.
inline void parallel_blocks(std::int64_t n,
                            const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  const int workers = std::min<std::int64_t>(worker_count(), n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_lock;
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min<std::int64_t>(begin + chunk, n);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> guard(error_lock);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rnd
