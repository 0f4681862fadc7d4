// Thread-count resolution (DYNHEAT_THREADS override) and a chunked
// parallel-for with deterministic merge order.
#pragma once

#include <functional>

namespace dynheat {

// DYNHEAT_THREADS when set, otherwise the hardware count (at least 1).
int thread_count();

// Runs body(i) for i in [0, n) on up to `threads` workers. Results must be
// written to per-index slots; the call returns after all workers join.
void parallel_for(long n, int threads, const std::function<void(long)>& body);

}  // namespace dynheat
