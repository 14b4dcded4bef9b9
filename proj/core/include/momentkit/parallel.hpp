#pragma once

#include <cstddef>
#include <functional>

namespace momentkit {

// MOMENTKIT_THREADS if set and positive, else hardware concurrency (at least 1).
unsigned default_thread_count();

// Runs body(i) for i in [0, n) on up to `threads` threads (0 = default).
// Iterations must be independent; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace momentkit
