#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace pandora {

// Runs fn(i) for i in [0, count). Each item must be independent and write
// only to its own slot of a pre-sized output; results are then identical for
// every jobs value, which is what the byte-determinism contract relies on.
inline void parallel_for(int jobs, std::size_t count,
                         const std::function<void(std::size_t)>& fn) {
  if (jobs < 1) jobs = 1;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace pandora
