#pragma once

#include <cstddef>
#include <functional>

namespace pqd {

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware concurrency).
// Results must be written to per-index slots; the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace pqd
