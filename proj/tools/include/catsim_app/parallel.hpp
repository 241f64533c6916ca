#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace catsim::app {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written by index; the first exception (lowest index) is rethrown.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(n, 0)));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int t = std::clamp(threads, 1, std::max(n, 1));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < t; ++k) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace catsim::app
