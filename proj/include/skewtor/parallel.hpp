// Index-parallel loops with a fixed thread count. Results are written by
// index, so any reduction done afterwards in index order is independent of
// the thread count.

#ifndef SKEWTOR_PARALLEL_HPP_
#define SKEWTOR_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace skewtor {

// Thread count from an explicit request (> 0), else SKEWTOR_THREADS, else 1.
int resolve_threads(int requested = 0);

// Calls body(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace skewtor

#endif  // SKEWTOR_PARALLEL_HPP_
