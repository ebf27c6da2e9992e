#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace adpt::detail {

// Runs body(i) for i in [0, count) on up to `jobs` threads using a fixed
// contiguous partition. Each index is visited exactly once, so results that
// are written per index do not depend on the thread count. The first
// exception thrown by any worker is rethrown after all workers join.
template <typename Body>
void parallel_for(int count, int jobs, Body&& body) {
  jobs = std::clamp(jobs, 1, std::max(count, 1));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    const int begin = static_cast<int>(static_cast<long>(count) * w / jobs);
    const int end = static_cast<int>(static_cast<long>(count) * (w + 1) / jobs);
    workers.emplace_back([&, w, begin, end] {
      try {
        for (int i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace adpt::detail
