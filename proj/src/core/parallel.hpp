#pragma once

#include <cstddef>
#include <functional>

namespace cvt {

/// Worker count, from CVTELEPORT_WORKERS (defaults to 1; capped at 64).
int worker_count();

/// Runs fn(i) for i in [0, n). With more than one worker the index range is
/// split into contiguous chunks; callers own any ordering of side effects
/// (write into a preallocated slot per index to stay deterministic).
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace cvt
