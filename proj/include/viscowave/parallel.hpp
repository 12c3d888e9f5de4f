#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace viscowave {

inline int worker_count(int n_items) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 4;
  if (const char* env = std::getenv("VISCOWAVE_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) hw = v;
  }
  return std::max(1, std::min(hw, n_items));
}

// Runs fn(i) for i in [0,n) on a small pool. Work items are claimed by an
// atomic counter; results must be written by index so output stays
// deterministic. The lowest-index exception is rethrown after the join.
template <class F>
void parallel_for(int n, F&& fn) {
  const int workers = worker_count(n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errs(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (int i = 0; i < n; ++i)
    if (errs[i]) std::rethrow_exception(errs[i]);
}

}  // namespace viscowave
