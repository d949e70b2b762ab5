#pragma once

#include <cstddef>
#include <functional>

namespace corrint {

/// Worker count: CORRINT_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(begin, end) over a static split of [0, n) into contiguous
/// chunks, one per worker. Chunk boundaries depend only on n and the worker
/// count, never on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace corrint
