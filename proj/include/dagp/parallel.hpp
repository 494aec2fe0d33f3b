#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace dagp {

/// Calls fn(i) for i in [0, count) split into contiguous blocks over
/// `workers` threads. fn must only write state owned by index i.
template <typename Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  workers = std::clamp(workers, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const int block = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int begin = w * block;
    const int end = std::min(count, begin + block);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] {
      for (int i = begin; i < end; ++i) fn(i);
    });
  }
}

}  // namespace dagp
