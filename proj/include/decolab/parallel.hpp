#pragma once

#include <cstddef>
#include <functional>

namespace decolab {

/// Worker count: DECOLAB_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
[[nodiscard]] int worker_count();

/// Calls task(i) for every i in [0, count) on up to worker_count() threads.
/// Tasks must write only to their own output slot; the first exception
/// thrown by any task is rethrown after all workers have stopped.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace decolab
