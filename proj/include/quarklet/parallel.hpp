#pragma once

#include <cstddef>
#include <functional>

namespace quarklet {

/// Worker count: QUARKLET_THREADS when set and positive, otherwise the hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Iterations must be independent.
/// Calls made from inside a body run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace quarklet
