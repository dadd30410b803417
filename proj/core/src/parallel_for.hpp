#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace npfs::detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count) over contiguous chunks. Results must be
// written into caller-owned slots indexed by i, so the outcome is identical
// for any thread count. The lowest-index exception wins and is rethrown.
inline void parallel_for(int count, int threads,
                         const std::function<void(int)>& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  if (threads > count) threads = count;

  std::vector<std::exception_ptr> errors(threads);
  std::vector<int> error_index(threads, -1);
  std::vector<std::thread> workers;
  workers.reserve(threads);

  const int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&, t, begin, end] {
      for (int i = begin; i < end; ++i) {
        try {
          fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
          error_index[t] = i;
          return;
        }
      }
    });
  }
  for (auto& worker : workers) worker.join();

  int first = -1;
  for (std::size_t t = 0; t < errors.size(); ++t) {
    if (errors[t] && (first < 0 || error_index[t] < error_index[first])) {
      first = static_cast<int>(t);
    }
  }
  if (first >= 0) std::rethrow_exception(errors[first]);
}

}  // namespace npfs::detail
