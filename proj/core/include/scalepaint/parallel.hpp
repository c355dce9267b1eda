#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace scalepaint::detail {

/// Number of worker threads used by parallel_blocks. Reads SCALEPAINT_THREADS
/// when set, otherwise std::thread::hardware_concurrency().
unsigned worker_count();

/// Runs fn(block) for every block in [0, blocks). Blocks are claimed
/// dynamically, so callers must write only to per-block storage and reduce
/// afterwards in block order. That keeps results independent of thread count.
template <typename Fn>
void parallel_blocks(std::size_t blocks, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(worker_count(), blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        fn(b);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(run);
  run();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace scalepaint::detail
