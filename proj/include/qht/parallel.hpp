#pragma once

#include <cstddef>
#include <functional>

namespace qht {

/// Worker count: hardware concurrency, capped by the QHT_THREADS environment
/// variable when it holds a positive integer.
unsigned worker_count();

/// Calls fn(i) for i in [0, n) on up to `workers` threads (worker_count() when
/// 0). Callers write results by index, so the output does not depend on
/// scheduling. If any call throws, the exception of the smallest failing index
/// is rethrown once all threads have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned workers = 0);

}  // namespace qht
