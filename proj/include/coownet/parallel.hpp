#ifndef COOWNET_PARALLEL_HPP
#define COOWNET_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace coownet {

// Runs fn(0..n-1) across up to `threads` workers (0 = hardware default).
// Work items must be independent; any exception is rethrown on the caller.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

int resolve_threads(int threads);

}  // namespace coownet

#endif
