#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace pppm {

/// Half-open range [begin, end) of the n items assigned to `worker` when n
/// items are split into `workers` contiguous chunks of near-equal size.
struct ChunkRange {
  std::size_t begin;
  std::size_t end;
};

inline ChunkRange chunk_range(std::size_t n, int workers, int worker) {
  const auto w = static_cast<std::size_t>(std::max(workers, 1));
  const auto k = static_cast<std::size_t>(worker);
  const std::size_t base = n / w;
  const std::size_t extra = n % w;
  const std::size_t begin = k * base + std::min(k, extra);
  return {begin, begin + base + (k < extra ? 1 : 0)};
}

/// Runs fn(worker, begin, end) for each of `workers` contiguous chunks of
/// [0, n). Worker 0 runs on the calling thread; exceptions are rethrown in
/// worker order after all threads joined.
template <class Fn>
void parallel_chunks(std::size_t n, int workers, Fn &&fn) {
  workers = std::max(workers, 1);
  if (workers == 1) {
    fn(0, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> threads;
    threads.reserve(static_cast<std::size_t>(workers - 1));
    for (int w = 1; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          const auto r = chunk_range(n, workers, w);
          fn(w, r.begin, r.end);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    try {
      const auto r = chunk_range(n, workers, 0);
      fn(0, r.begin, r.end);
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

} // namespace pppm
