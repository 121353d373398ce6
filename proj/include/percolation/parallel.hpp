#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace percolation {

/// Resolves a requested worker count; 0 means hardware parallelism.
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Splits [0, count) into `blocks` contiguous chunks and runs
/// `fn(block, begin, end)` for each on up to `threads` workers. Block
/// boundaries depend only on (count, blocks), so per-block results reduced
/// in block order are independent of the thread count.
template <typename Fn>
void for_each_block(std::size_t count, std::size_t blocks, unsigned threads, Fn&& fn) {
  if (count == 0) return;
  blocks = std::clamp<std::size_t>(blocks, 1, count);
  auto bounds = [&](std::size_t b) { return count * b / blocks; };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));

  if (threads == 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b, bounds(b), bounds(b + 1));
    return;
  }

  std::mutex error_mutex;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t b = t; b < blocks; b += threads) fn(b, bounds(b), bounds(b + 1));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace percolation
