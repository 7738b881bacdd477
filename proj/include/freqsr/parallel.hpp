#pragma once

#include <cstddef>
#include <functional>

namespace freqsr {

// requested > 0 wins; otherwise FREQSR_THREADS, then the hardware count.
int resolve_threads(int requested = 0);

// Runs fn(i) for i in [0, n) on `threads` workers pulling indices from a
// shared counter. fn must only write to slots owned by i. The first
// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace freqsr
