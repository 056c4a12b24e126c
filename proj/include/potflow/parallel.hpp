#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace potflow {

/// Worker threads available to data-parallel loops: hardware concurrency,
/// capped by the POTFLOW_THREADS environment variable when set.
unsigned worker_count();

/// Runs body(i) for i in [0, n) over worker_count() threads using static
/// contiguous chunks. Results must be written to per-index slots; the first
/// exception (lowest chunk) is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      try {
        for (std::size_t i = begin; i < end; ++i) {
          body(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) {
    t.join();
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

} // namespace potflow
