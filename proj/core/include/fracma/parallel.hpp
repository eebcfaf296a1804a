#pragma once

#include <cstdint>
#include <functional>

namespace fracma {

// Worker count: FRACMA_THREADS if set (clamped to [1, 256]), else
// std::thread::hardware_concurrency().
int thread_count();

// Runs body(i) for i in [0, n). Work is split into contiguous blocks, one per
// worker. Results must be written to disjoint slots indexed by i so the
// output is identical for any thread count. An exception thrown by body is
// rethrown on the calling thread after all workers finish.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body);

}  // namespace fracma
