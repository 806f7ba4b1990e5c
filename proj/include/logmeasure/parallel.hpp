#pragma once

#include <cstddef>
#include <functional>

namespace logmeasure {

/// Worker count from LOGMEASURE_THREADS, else hardware concurrency (>= 1).
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is handled exactly once; callers
/// write results into per-index slots so the outcome is order independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace logmeasure
