#pragma once

#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace finsler {

// Index-sliced parallel loop. Each index writes its own slot, so results are
// independent of the worker count; reductions happen sequentially afterwards.
inline void parallel_for(int n, const std::function<void(int)>& fn, int workers = 0) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace finsler
