#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace koblab {

/// Index-parallel loop with deterministic output: `fn(i)` must write only to
/// slot i of preallocated storage. jobs <= 1 runs inline.
inline void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const int workers = std::min(jobs, n);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace koblab
