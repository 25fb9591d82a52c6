#pragma once

#include <functional>

namespace dilab {

/// Worker cap: DILATION_LAB_THREADS when set, hardware concurrency otherwise.
int thread_cap();

/// Runs fn(0..count-1) on up to thread_cap() workers. Each index must write
/// only its own output slot; results are then independent of scheduling.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace dilab
