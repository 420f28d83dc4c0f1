#pragma once

#include <cstddef>
#include <functional>

namespace grw {

// Worker cap taken from GRWFLOW_THREADS (>=1); defaults to the hardware
// concurrency clamped to 8.  Read once and cached.
std::size_t worker_count();

// Static range split over the worker pool.  fn(begin, end) is invoked on
// disjoint index ranges; results must not depend on the partitioning.
// Ranges shorter than grain run inline.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn,
                  std::size_t grain = 8192);

}  // namespace grw
