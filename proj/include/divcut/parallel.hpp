#pragma once

#include <cstddef>
#include <functional>

namespace divcut {

/// Worker count: DIVCUT_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads.
/// Callers write results into per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace divcut
