#pragma once

#include <cstddef>
#include <functional>

namespace resonax {

/// Worker count: hardware concurrency capped by RESONAX_THREADS when set.
int worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads. Every index
/// runs even when some throw; the exception of the lowest failing index is
/// rethrown, so failures are reproducible.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace resonax
