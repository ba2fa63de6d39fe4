#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ioqfr {

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is visited
/// exactly once; the first exception thrown by any worker is rethrown here.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Worker count from IOQFR_THREADS, capped by the hardware; 1 when unset or invalid.
inline unsigned threads_from_env() {
  const char* v = std::getenv("IOQFR_THREADS");
  if (v == nullptr) return 1;
  try {
    const long n = std::stol(v);
    if (n < 1) return 1;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<long>(n, static_cast<long>(hw)));
  } catch (...) {
    return 1;
  }
}

}  // namespace ioqfr
