#pragma once

#include <functional>

namespace nld {

// 0 means one worker per hardware thread.
int resolve_threads(int requested);

// Runs fn(0..n-1) on up to `threads` workers with static contiguous chunks.
// Callers write results into preallocated slots, so output never depends on
// scheduling. The first exception thrown by any worker is rethrown.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace nld
