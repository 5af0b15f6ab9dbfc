#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sch {

// Brownian-sheet cell increments on the m x n space-time mesh over
// [0,T] x [0,pi]. Cell (i,k) holds the W-increment of the rectangle
// [t_i, t_{i+1}] x [k h, (k+1) h]; cells are i.i.d. N(0, tau*h).
//
// Cells are quantized to a power-of-two lattice a few dozen bits below the
// cell standard deviation. Block sums of quantized cells are then exact in
// double precision, so coarsening in space and in time commutes bit-exactly
// and every coarse level is an exact function of the finest sheet. The
// quantization offset (~2^-32 of a standard deviation) is far below anything
// observable statistically.
class NoiseSheet {
 public:
  static NoiseSheet sample(std::uint64_t seed, int n, int m, double T);

  int n() const { return n_; }
  int m() const { return m_; }
  double T() const { return T_; }
  std::uint64_t seed() const { return seed_; }
  double tau() const { return T_ / m_; }
  double cell_variance() const;  // tau * h

  double cell(int i, int k) const { return cells_[static_cast<std::size_t>(i) * n_ + k]; }

  // beta^k increments driving the (n-1)-dimensional SDE: component k
  // (k = 1..n-1) equals sqrt(n/pi) * cell(i, k). Cell 0 does not feed beta.
  std::vector<double> beta_increment(int i) const;

  NoiseSheet coarsen_space() const;  // requires n even
  NoiseSheet coarsen_time() const;   // requires m even

  // Debug dump/restore; row = time index, full precision. Not load-bearing.
  void write_csv(std::ostream& out) const;
  static NoiseSheet read_csv(std::istream& in);

 private:
  NoiseSheet(std::uint64_t seed, int n, int m, double T, std::vector<double> cells)
      : seed_(seed), n_(n), m_(m), T_(T), cells_(std::move(cells)) {}

  std::uint64_t seed_ = 0;
  int n_ = 0;
  int m_ = 0;
  double T_ = 0.0;
  std::vector<double> cells_;  // row-major, cells_[i*n + k]
};

}  // namespace sch
