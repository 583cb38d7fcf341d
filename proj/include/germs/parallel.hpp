#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace germs {

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// Runs check(i) for i in [0, n) on a pool of threads and returns the failure
// with the smallest index, so the outcome never depends on scheduling.
// Indices above an already-known failure are skipped.
template <class Failure, class Check>
std::optional<std::pair<std::size_t, Failure>> first_failure(std::size_t n, unsigned threads, Check check) {
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{n};
  std::mutex mu;
  std::optional<std::pair<std::size_t, Failure>> result;
  std::exception_ptr error;
  std::size_t error_index = n;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n || i > best.load()) return;
      try {
        std::optional<Failure> f = check(i);
        if (!f) continue;
        std::lock_guard<std::mutex> lock(mu);
        if (!result || i < result->first) {
          result.emplace(i, std::move(*f));
          best = i;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        if (i < best.load()) best = i;
      }
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error && (!result || error_index < result->first)) std::rethrow_exception(error);
  return result;
}

}  // namespace germs
