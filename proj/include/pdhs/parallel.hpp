#pragma once

#include <cstddef>
#include <functional>

namespace pdhs {

/// Number of worker threads used by the per-mode loops. Defaults to 1.
/// Results never depend on this value: every loop writes disjoint output
/// slots and all reductions happen serially afterwards.
void set_num_threads(int n);
int num_threads();

/// Calls fn(i) for i in [begin, end), split into contiguous static chunks.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

}  // namespace pdhs
