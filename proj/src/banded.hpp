#pragma once

#include <span>
#include <vector>

namespace sch {

// Dense-in-band storage for a square matrix with kl sub- and ku
// superdiagonals, laid out for LAPACK's general band solver. Used for the
// pentadiagonal Newton systems I + tau A_n^2 - tau A_n diag(f'(x)).
class BandedMatrix {
 public:
  BandedMatrix(int dim, int kl, int ku);

  int dim() const { return dim_; }
  void zero();
  // Valid for |row - col| within the band; anything else is a logic error.
  double& at(int row, int col);
  double at(int row, int col) const;

  // Solves A x = rhs in-place via LAPACK banded LU with partial pivoting
  // (dgbsv). Throws std::runtime_error if the factorization is singular.
  // Overwrites the stored factors; refill before reusing.
  void solve(std::span<double> rhs);

 private:
  int dim_, kl_, ku_;
  std::vector<double> storage_;  // column-major, 2*kl+ku+1 rows
  std::vector<int> pivots_;
};

}  // namespace sch
