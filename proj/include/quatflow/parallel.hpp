#pragma once

#include <cstddef>
#include <functional>

namespace quatflow {

/// Worker cap: QUATFLOW_THREADS when set to a positive integer, otherwise 1.
int worker_count();

/// Splits [0, count) into contiguous chunks, one per worker, and runs
/// body(begin, end) on each. Chunk boundaries depend only on count and the
/// worker cap; callers must not reduce across chunks inside body.
void parallel_for(std::ptrdiff_t count, const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body);

}  // namespace quatflow
