#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace halt_lab {

/// Runs `fn(i)` for every i in [0, count) on up to `workers` threads.
/// Indices are handed out dynamically; callers write results by index so
/// the outcome is independent of scheduling. The first exception thrown by
/// any worker is rethrown on the calling thread.
template <typename Fn>
void parallelFor(std::size_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    try {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = count;
    }
  };
  std::vector<std::thread> pool;
  const auto spawn = std::min<std::size_t>(workers, count);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

/// Worker count from HALT_LAB_WORKERS, else 1.
unsigned defaultWorkers();

}  // namespace halt_lab
