#pragma once

#include <cstddef>
#include <functional>

namespace billiards {

/// Number of worker threads: hardware concurrency capped by the
/// BILLIARDS_THREADS environment variable (if set and positive).
unsigned worker_count();

/// Run fn(i) for i in [0, n), splitting the range over the workers.
/// Results must be written to disjoint slots; the first exception thrown by
/// any worker is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace billiards
