#ifndef FWI_PARALLEL_H_
#define FWI_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fwi {

// Runs body(i) for every i in [0, n_tasks) on up to hardware_concurrency
// threads. Tasks must write only to their own output slot; the first exception
// thrown by any task is rethrown on the calling thread.
inline void ParallelFor(std::size_t n_tasks,
                        const std::function<void(std::size_t)>& body) {
  const std::size_t n_workers = std::min<std::size_t>(
      n_tasks, std::max(1u, std::thread::hardware_concurrency()));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < n_tasks; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(n_workers - 1);
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fwi

#endif  // FWI_PARALLEL_H_
