#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace epoly {

/// Environment variable consulted when no explicit thread count is given.
inline constexpr const char* kThreadsEnv = "EPOLY_THREADS";

/// requested > 0 wins; otherwise $EPOLY_THREADS; otherwise the hardware count.
inline int resolve_threads(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kThreadsEnv)) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs fn(chunk) for chunk in [0, n_chunks) on up to `threads` workers and
/// returns the results indexed by chunk. The first exception thrown by any
/// chunk is rethrown on the calling thread.
template <class T, class Fn>
std::vector<T> parallel_chunks(std::size_t n_chunks, int threads, Fn&& fn) {
  std::vector<T> out(n_chunks);
  const std::size_t workers =
      std::min<std::size_t>(n_chunks, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) out[c] = fn(c);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t c = next.fetch_add(1);
          if (c >= n_chunks) return;
          try {
            out[c] = fn(c);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next.store(n_chunks);
            return;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace epoly
