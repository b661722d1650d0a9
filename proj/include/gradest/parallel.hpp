#pragma once

#include <cstddef>
#include <functional>

namespace gradest {

/// Worker count: hardware concurrency, capped by GRADEST_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index is visited exactly once; the
/// first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace gradest
