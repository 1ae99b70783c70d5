#pragma once

#include <cstddef>
#include <functional>

namespace ecca {

// Process-wide worker cap. Starts from the ECCA_THREADS environment
// variable if set, otherwise hardware concurrency. The CLI --threads flag
// overrides it. Thread count never changes results: every parallel loop
// in this library writes task i's output to slot i.
std::size_t default_threads();
void set_default_threads(std::size_t n);

// Runs fn(0..count-1), scheduling tasks over at most `threads` workers
// (0 means use default_threads()). Exceptions from tasks are rethrown on
// the calling thread after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  std::size_t threads = 0);

}  // namespace ecca
