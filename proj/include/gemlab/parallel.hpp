#pragma once

#include <cstdint>
#include <functional>

namespace gemlab {

/// Worker count used when a caller passes 0: hardware concurrency, at least 1.
unsigned default_threads();

/// Runs `fn(i)` for every i in [0, n) on up to `threads` worker threads
/// (0 = default_threads()). `fn` must be safe to call concurrently for
/// distinct i. The first exception thrown by any call is rethrown.
void parallel_for(std::uint64_t n, const std::function<void(std::uint64_t)>& fn,
                  unsigned threads = 0);

}  // namespace gemlab
