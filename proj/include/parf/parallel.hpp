/**
 * @file   parallel.hpp
 * @brief  Static-partition parallel loop. Each index is processed by exactly
 *         one thread, so callers that write per-index outputs get results that
 *         do not depend on the thread count.
 */
#ifndef PARF_PARALLEL_HPP
#define PARF_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace parf {

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  std::size_t t = static_cast<std::size_t>(std::max(1, threads));
  if (t == 1 || n < 2 * t) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t - 1);
  std::size_t chunk = (n + t - 1) / t;
  for (std::size_t k = 1; k < t; ++k) {
    std::size_t b = k * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] {
      for (std::size_t i = b; i < e; ++i) fn(i);
    });
  }
  for (std::size_t i = 0; i < std::min(n, chunk); ++i) fn(i);
  for (auto& th : pool) th.join();
}

}  // namespace parf

#endif
