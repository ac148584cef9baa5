#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace lurelab {

// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
// Each index is processed exactly once; results must be written to
// per-index slots so the outcome does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, const Body& body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace lurelab
