#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace metachain {

/// Threads used by parallel_map. Defaults to the hardware concurrency; 0
/// restores the default.
void set_worker_threads(std::size_t n);
std::size_t worker_threads();

/// out[i] = f(i) for i < count, computed by up to worker_threads() threads
/// pulling indices from a shared counter. Results keep index order. If
/// several calls throw, the exception of the lowest index is rethrown, so
/// failures do not depend on scheduling.
template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& f) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = std::min(worker_threads(), count);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace metachain
