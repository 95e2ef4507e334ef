// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace gpgof {

// Runs fn(begin, end) over a static partition of [0, count) on the given
// number of threads. Work units must write only to their own index slots;
// under that contract results are independent of the thread count. The
// first exception thrown by any worker is rethrown on the caller.
template <typename Fn>
void parallel_chunks(std::int64_t count, int threads, Fn&& fn) {
  if (count <= 0) return;
  if (threads < 1) throw std::domain_error("thread count must be >= 1");
  if (threads == 1 || count == 1) {
    fn(std::int64_t{0}, count);
    return;
  }
  const int workers = static_cast<int>(
      std::min<std::int64_t>(threads, count));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::int64_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min(count, begin + chunk);
    pool.emplace_back([&fn, &errors, w, begin, end] {
      try {
        if (begin < end) fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace gpgof
