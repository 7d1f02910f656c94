#pragma once

#include <cstddef>
#include <functional>

namespace cimac {

// Worker count: CIMAC_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int worker_count();

// Splits [0, count) into contiguous chunks, one per worker, and runs
// body(begin, end) on each. The first exception thrown by any chunk is
// rethrown after all workers finish.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace cimac
