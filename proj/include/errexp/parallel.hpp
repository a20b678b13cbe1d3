#pragma once
#include <cstddef>
#include <functional>
#include <vector>

namespace errexp {

// Process switch between the OpenMP kernels and the serial reference path.
// The serial path runs the same loops without worker threads; because all
// randomness is counter-based and reductions are blocked, both paths produce
// bit-identical results.
void set_parallel_enabled(bool on);
bool parallel_enabled();
void set_worker_count(int n);  // 0 = library default
int worker_count();

// parallel_for(n, f): f(i) for i in [0, n), any order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

// Deterministic blocked sum: values are produced per fixed-size block
// (blocks filled in parallel), then blocks are combined serially in index
// order.  The result is bit-identical for any worker count.
inline constexpr std::size_t kSumBlock = 8192;

double blocked_sum(std::size_t n, const std::function<double(std::size_t)>& term);

// Same, but also accumulates the sum of squares for variance estimates.
struct SumWithSquares {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
};
SumWithSquares blocked_sum_sq(std::size_t n, const std::function<double(std::size_t)>& term);

}  // namespace errexp
