#include "noise.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "grid.hpp"
#include "rng.hpp"

namespace sch {

double NoiseSheet::cell_variance() const { return (T_ / m_) * (kPi / n_); }

NoiseSheet NoiseSheet::sample(std::uint64_t seed, int n, int m, double T) {
  if (n < 2) throw std::invalid_argument("noise sheet needs n >= 2 spatial cells");
  if (m < 1) throw std::invalid_argument("noise sheet needs m >= 1 time steps");
  if (!(T > 0.0)) throw std::invalid_argument("noise sheet horizon T must be > 0");
  const double sigma = std::sqrt((T / m) * (kPi / n));
  // Power-of-two quantum ~2^-32 below the cell scale keeps block sums exact.
  const double quantum = std::ldexp(1.0, std::ilogb(sigma) - 32);
  std::vector<double> cells(static_cast<std::size_t>(m) * n);
  Rng rng(derive_seed(seed, 0x7368656574ULL));
  for (auto& c : cells) c = std::round(rng.normal() * sigma / quantum) * quantum;
  return NoiseSheet(seed, n, m, T, std::move(cells));
}

std::vector<double> NoiseSheet::beta_increment(int i) const {
  if (i < 0 || i >= m_) throw std::invalid_argument("time index out of range in beta_increment");
  const double scale = std::sqrt(n_ / kPi);
  std::vector<double> beta(n_ - 1);
  for (int k = 1; k < n_; ++k) beta[k - 1] = scale * cell(i, k);
  return beta;
}

NoiseSheet NoiseSheet::coarsen_space() const {
  if (n_ % 2 != 0) throw std::invalid_argument("coarsen_space requires an even cell count n");
  const int cn = n_ / 2;
  std::vector<double> coarse(static_cast<std::size_t>(m_) * cn);
  for (int i = 0; i < m_; ++i)
    for (int k = 0; k < cn; ++k)
      coarse[static_cast<std::size_t>(i) * cn + k] = cell(i, 2 * k) + cell(i, 2 * k + 1);
  return NoiseSheet(seed_, cn, m_, T_, std::move(coarse));
}

NoiseSheet NoiseSheet::coarsen_time() const {
  if (m_ % 2 != 0) throw std::invalid_argument("coarsen_time requires an even step count m");
  const int cm = m_ / 2;
  std::vector<double> coarse(static_cast<std::size_t>(cm) * n_);
  for (int i = 0; i < cm; ++i)
    for (int k = 0; k < n_; ++k)
      coarse[static_cast<std::size_t>(i) * n_ + k] = cell(2 * i, k) + cell(2 * i + 1, k);
  return NoiseSheet(seed_, n_, cm, T_, std::move(coarse));
}

void NoiseSheet::write_csv(std::ostream& out) const {
  out << "# stochch noise sheet v1 n=" << n_ << " m=" << m_ << " T=";
  out.precision(17);
  out << T_ << " seed=" << seed_ << "\n";
  for (int i = 0; i < m_; ++i) {
    for (int k = 0; k < n_; ++k) {
      if (k) out << ',';
      out << cell(i, k);
    }
    out << '\n';
  }
}

NoiseSheet NoiseSheet::read_csv(std::istream& in) {
  std::string header;
  std::getline(in, header);
  int n = 0, m = 0;
  double T = 0.0;
  unsigned long long seed = 0;
  if (std::sscanf(header.c_str(), "# stochch noise sheet v1 n=%d m=%d T=%lf seed=%llu",
                  &n, &m, &T, &seed) != 4)
    throw std::invalid_argument("unrecognized noise sheet header");
  std::vector<double> cells;
  cells.reserve(static_cast<std::size_t>(m) * n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tok;
    while (std::getline(row, tok, ',')) cells.push_back(std::stod(tok));
  }
  if (cells.size() != static_cast<std::size_t>(m) * n)
    throw std::invalid_argument("noise sheet body does not match header dimensions");
  return NoiseSheet(seed, n, m, T, std::move(cells));
}

}  // namespace sch
