#pragma once

#include <cstddef>
#include <functional>

namespace qew {

/// Worker cap: QEW_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1). Never affects results.
unsigned worker_count();

/// Runs body(i) for i in [0, n) over up to worker_count() threads. Callers
/// write results into per-index slots and reduce in index order afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qew
