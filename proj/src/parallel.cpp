#include "grw/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace grw {

std::size_t worker_count() {
  static const std::size_t cached = [] {
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    std::size_t n = std::min<std::size_t>(hw, 8);
    if (const char* env = std::getenv("GRWFLOW_THREADS")) {
      const long req = std::strtol(env, nullptr, 10);
      if (req >= 1) n = static_cast<std::size_t>(req);
    }
    return n;
  }();
  return cached;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn,
                  std::size_t grain) {
  const std::size_t workers = worker_count();
  // Fan-out only pays off for fat ranges; the cutoff does not affect results.
  if (workers <= 1 || n < grain) {
    fn(0, n);
    return;
  }
  const std::size_t parts = std::min(workers, n);
  const std::size_t chunk = (n + parts - 1) / parts;
  std::vector<std::thread> pool;
  pool.reserve(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    const std::size_t b = p * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace grw
