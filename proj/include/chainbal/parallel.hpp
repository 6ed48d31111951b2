// parallel.hpp -- index-sharded worker loop with slot-deterministic output.
//
// Runs body(i) for i in [0, count), striped over up to `jobs` threads by an
// atomic counter. Callers write results into pre-sized per-index slots, so
// output never depends on scheduling. If bodies throw, one captured
// exception is rethrown after the join (which one is unspecified when
// several indices fail concurrently).
#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace chainbal {

inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t)>& body) {
  int workers = jobs < 1 ? 1 : jobs;
  if (static_cast<std::size_t>(workers) > count) workers = static_cast<int>(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace chainbal
