#pragma once

#include <span>

namespace sch {

// Orthonormal DST-I on the n-1 interior points of a Dirichlet grid:
//
//   out[j-1] = sqrt(2/n) * sum_{k=1}^{n-1} in[k-1] * sin(j k pi / n)
//
// The transform is its own inverse, and the coefficients it produces are the
// expansion coefficients in the orthonormal eigenvector basis {e_j} of the
// discrete Dirichlet Laplacian. Backed by FFTW (RODFT00), O(n log n).
// `in` and `out` must not alias and must each have n-1 elements.
namespace sine_transform {

void apply(int n, std::span<const double> in, std::span<double> out);

}  // namespace sine_transform

}  // namespace sch
