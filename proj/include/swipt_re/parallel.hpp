#pragma once

#include <functional>

namespace swipt {

/// Worker count: `requested` if positive, else SWIPT_RE_THREADS if set and
/// positive, else hardware concurrency.
int resolve_threads(int requested);

/// Runs fn(0..n-1) on up to `threads` workers. Each index is handled exactly
/// once; results must be written to per-index slots so output does not depend
/// on scheduling. The first exception thrown by any task is rethrown.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace swipt
