#pragma once

#include <cstddef>
#include <span>

namespace sch {

// Pairwise summation. The reduction tree depends only on the element order,
// so accumulating per-slot results and summing afterwards gives totals that
// do not depend on how work was scheduled across threads.
inline double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_mean(std::span<const double> v) {
  return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

}  // namespace sch
