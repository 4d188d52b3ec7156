#pragma once

#include <cstddef>
#include <functional>

namespace hesvs {

// Worker count: HESVS_THREADS when set, hardware concurrency otherwise.
int thread_count();

// Runs body(0..count-1) over contiguous index chunks.  Results must go to
// preassigned slots; the split does not affect them.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Recursive adaptive Simpson quadrature.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tolerance);

}  // namespace hesvs
