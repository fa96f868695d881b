#pragma once

#include <cstddef>
#include <functional>

namespace dirgamma {

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Work is handed out by an atomic counter; callers write
/// results into slot i so the outcome is independent of scheduling. The
/// first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace dirgamma
