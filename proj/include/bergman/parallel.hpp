#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace bergman {

/// Caps the worker pool used by library loops (>= 1). Defaults to the
/// hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Work items are independent; the caller owns
/// any reduction so results never depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise-tree sum with a shape fixed by the input length only.
double tree_sum(std::span<const double> v);

}  // namespace bergman
