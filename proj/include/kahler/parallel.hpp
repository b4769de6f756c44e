#pragma once

#include <cstddef>
#include <functional>

namespace kahler {

// Worker count: KAHLER_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, count). Calls made from inside a running
// parallel_for execute inline, so nesting does not oversubscribe. The first
// exception thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace kahler
