#pragma once

#include <cstddef>
#include <functional>

namespace canon {

/// Worker count: CANON_FACTOR_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Iterations must be independent; each index is
/// visited exactly once, so results written by index are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace canon
