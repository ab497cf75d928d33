#pragma once

#include <cstddef>
#include <functional>

namespace risem {

/// Worker count from RIS_EM_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n) on up to
/// `workers` threads (0 = worker_count()). Chunk boundaries depend only on
/// n and the chunk size, never on thread timing. The first exception thrown
/// by any chunk is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  unsigned workers = 0, std::size_t chunk = 1024);

}  // namespace risem
