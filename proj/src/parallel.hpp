#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace facetrack::detail {

// Deterministic map over [0, count): each index writes only its own slot, so
// the result is identical for any worker count. The first failing index's
// exception (in index order) is rethrown after all workers join.
template <typename Fn>
void parallel_for_index(int count, int workers, Fn&& fn) {
  if (count <= 0) return;
  workers = std::min(workers < 1 ? 1 : workers, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Worker count for realization parallelism: FACETRACK_THREADS when set,
// otherwise the hardware concurrency.
int default_worker_count();

}  // namespace facetrack::detail
