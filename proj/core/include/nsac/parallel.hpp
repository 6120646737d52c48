#pragma once

#include <cstddef>
#include <functional>

namespace nsac {

/// Worker count for assembly loops: hardware concurrency, capped by the
/// NSAC_THREADS environment variable when it is set to a positive integer.
int assembly_threads();

/// Calls body(i) for i in [0, count) split into contiguous chunks across
/// assembly_threads() workers. Callers write to disjoint per-item slots so
/// results do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace nsac
