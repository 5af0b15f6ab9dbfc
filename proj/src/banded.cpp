#include "banded.hpp"

#include <lapacke.h>

#include <cassert>
#include <stdexcept>

namespace sch {

BandedMatrix::BandedMatrix(int dim, int kl, int ku)
    : dim_(dim), kl_(kl), ku_(ku),
      storage_(static_cast<std::size_t>(dim) * (2 * kl + ku + 1), 0.0),
      pivots_(dim) {}

void BandedMatrix::zero() { storage_.assign(storage_.size(), 0.0); }

// LAPACK band storage: entry (i,j) sits at AB[kl + ku + i - j, j] in a
// column-major array with leading dimension 2*kl + ku + 1.
double& BandedMatrix::at(int row, int col) {
  assert(row >= 0 && row < dim_ && col >= 0 && col < dim_);
  assert(col - row <= ku_ && row - col <= kl_);
  const int ldab = 2 * kl_ + ku_ + 1;
  return storage_[static_cast<std::size_t>(col) * ldab + (kl_ + ku_ + row - col)];
}

double BandedMatrix::at(int row, int col) const {
  return const_cast<BandedMatrix*>(this)->at(row, col);
}

void BandedMatrix::solve(std::span<double> rhs) {
  assert(static_cast<int>(rhs.size()) == dim_);
  const int ldab = 2 * kl_ + ku_ + 1;
  lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, dim_, kl_, ku_, 1,
                                  storage_.data(), ldab, pivots_.data(),
                                  rhs.data(), dim_);
  if (info != 0) throw std::runtime_error("banded LU solve failed (singular Newton system)");
}

}  // namespace sch
