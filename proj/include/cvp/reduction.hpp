#pragma once

// Deterministic reductions and a minimal row-parallel loop.
//
// Row results are written into per-index slots and reduced in a fixed
// pairwise order, so totals do not depend on the thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cvp {

/// Pairwise (cascade) summation in a fixed order.
double pairwise_sum(std::span<const double> values);

/// Global worker count used by parallel_for; 1 means sequential.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(i) for i in [0, n), splitting contiguous index blocks across workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Evaluates row(i) for every i and returns the pairwise sum of the rows.
double reduce_rows(std::size_t n, const std::function<double(std::size_t)>& row);

}  // namespace cvp
