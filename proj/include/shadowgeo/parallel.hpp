#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace shadowgeo {

/// Worker count: `requested` if positive, else SHADOWGEO_THREADS, else 1.
int resolve_threads(int requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Every index
/// writes only its own output slot, so results do not depend on the thread
/// count. The first exception thrown (lowest index) is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace shadowgeo
