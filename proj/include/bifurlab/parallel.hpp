#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace bifurlab {

/// Worker count for grid sweeps. Defaults to BIFURLAB_THREADS when set,
/// otherwise the hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, n) over contiguous chunks. Each index is handled
/// exactly once, so writes to per-index slots are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (tree) summation; the result does not depend on the thread count.
double pairwise_sum(std::span<const double> xs);

}  // namespace bifurlab
