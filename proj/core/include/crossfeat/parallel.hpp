#pragma once

#include <cstddef>
#include <functional>

namespace crossfeat {

// Runs fn(i) for i in [0, n) across up to `workers` threads (chunked ranges).
// Tasks must write only to their own output slots; results are then identical
// for any worker count. workers 0 or 1 runs inline.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

std::size_t default_worker_count();

}  // namespace crossfeat
