#pragma once

// Deterministic parallel helpers. Work is split into contiguous index ranges
// whose boundaries do not depend on the thread count, and every reduction is
// performed in a fixed pairwise order, so results are bit-identical for any
// WALSHLAB_THREADS setting.

#include <cstddef>
#include <functional>
#include <span>

namespace walshlab {

/// Thread cap: WALSHLAB_THREADS when set to a positive integer, otherwise the
/// hardware concurrency. Read on every call.
unsigned thread_cap();

/// Calls body(begin, end) over disjoint ranges covering [0, count).
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

/// Pairwise (cascade) sum in ascending index order.
double pairwise_sum(std::span<const double> values);

}  // namespace walshlab
