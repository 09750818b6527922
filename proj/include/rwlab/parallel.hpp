#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rwlab {

/// Worker count used by parallel_for; at least 1.
inline unsigned worker_count() {
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(i) for every i in [0, n). Indices are handed out in chunks from
/// a shared counter, so each body must only write state owned by its index.
/// The first exception thrown by any body is rethrown after all workers stop.
template <class Body>
void parallel_for(std::size_t n, Body&& body, std::size_t chunk = 16) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), (n + chunk - 1) / chunk));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t start = next.fetch_add(chunk);
      if (start >= n) break;
      const std::size_t stop = std::min(n, start + chunk);
      try {
        for (std::size_t i = start; i < stop; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rwlab
