#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace weylbessel {

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware concurrency).
/// Work is split into contiguous blocks. Each index is processed exactly once, so results
/// written to slot i do not depend on the worker count. If any body throws, the exception
/// from the lowest failing block is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Pairwise (cascade) summation; the result depends only on the order of `values`.
template <class Range>
double pairwise_sum(const Range& values, std::size_t begin, std::size_t end) {
  if (end - begin <= 8) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += values[i];
    return s;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum(values, begin, mid) + pairwise_sum(values, mid, end);
}

template <class Range>
double pairwise_sum(const Range& values) {
  return pairwise_sum(values, 0, values.size());
}

}  // namespace weylbessel
