#pragma once

#include <functional>

namespace randboot::par {

// Effective worker count: `requested` if positive, otherwise the
// RANDBOOT_THREADS environment variable, otherwise hardware concurrency.
int resolve_threads(int requested);

// Runs fn(0..count-1) across `threads` workers, dynamically scheduled.
// Callers must make fn(i) write only to slot i of preallocated storage so
// results do not depend on the schedule. The first exception thrown by any
// fn aborts the remaining work and is rethrown on the calling thread.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace randboot::par
