#pragma once

#include <cstddef>
#include <functional>

namespace drift {

/// Run fn(0..n-1) across hardware threads. Callers own output slots per
/// index, so results are deterministic regardless of scheduling; the first
/// exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace drift
