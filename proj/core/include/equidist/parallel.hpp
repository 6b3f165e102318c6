#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace equidist {

/// Requested count, else $EQUIDIST_THREADS, else 1.
unsigned resolve_threads(std::optional<unsigned> requested);

/// Calls f(i) for i in [0, count) on up to `threads` workers. Work is striped
/// by index, so callers that write results into slot i get output that does
/// not depend on the thread count. The first exception is rethrown.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) f(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace equidist
