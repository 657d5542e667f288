#pragma once

#include <cstddef>
#include <functional>

namespace annrot {

// Global worker count (0 = hardware concurrency); affects speed only. All
// parallel loops write results into preallocated per-index slots and all
// reductions are order-fixed, so results are identical for any worker count.
void set_worker_count(int n);
int worker_count();

void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace annrot
