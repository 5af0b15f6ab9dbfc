#include "grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "sine_transform.hpp"

namespace sch {

namespace {

void require_match(const GridFunction& v, const Grid& grid) {
  if (!(v.grid() == grid))
    throw std::invalid_argument("grid mismatch between operands");
}

// Applies v |-> sum_j weight(lambda_j) <v,e_j> e_j via two sine transforms.
GridFunction apply_spectral(const GridFunction& v,
                            const std::function<double(double)>& weight) {
  const Grid grid = v.grid();
  const int interior = grid.interior_count();
  std::vector<double> coeffs(interior), out(interior);
  sine_transform::apply(grid.n, v.values(), coeffs);
  for (int j = 1; j <= interior; ++j) coeffs[j - 1] *= weight(eigenvalue(grid, j));
  sine_transform::apply(grid.n, coeffs, out);
  return GridFunction(grid, std::move(out));
}

}  // namespace

Grid Grid::make(int n) {
  if (n < 2) throw std::invalid_argument("grid size n must be >= 2, got " + std::to_string(n));
  return Grid{n, kPi / n};
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.interior_count())
    throw std::invalid_argument("grid function length must be n-1");
}

GridFunction GridFunction::zero(Grid grid) {
  return GridFunction(grid, std::vector<double>(grid.interior_count(), 0.0));
}

GridFunction GridFunction::sample(Grid grid, const std::function<double(double)>& f) {
  std::vector<double> values(grid.interior_count());
  for (int k = 1; k <= grid.interior_count(); ++k) values[k - 1] = f(grid.point(k));
  return GridFunction(grid, std::move(values));
}

double c_factor(const Grid& grid, int j) {
  if (j < 1 || j > grid.interior_count())
    throw std::invalid_argument("eigenindex j out of range 1..n-1");
  const double a = j * kPi / (2.0 * grid.n);
  const double s = std::sin(a) / a;
  return s * s;
}

double eigenvalue(const Grid& grid, int j) {
  return -static_cast<double>(j) * j * c_factor(grid, j);
}

GridFunction eigenvector(const Grid& grid, int j) {
  if (j < 1 || j > grid.interior_count())
    throw std::invalid_argument("eigenindex j out of range 1..n-1");
  const double scale = std::sqrt(2.0 / grid.n);
  std::vector<double> values(grid.interior_count());
  for (int k = 1; k <= grid.interior_count(); ++k)
    values[k - 1] = scale * std::sin(j * k * kPi / grid.n);
  return GridFunction(grid, std::move(values));
}

std::pair<double, GridFunction> eigen_pair(const Grid& grid, int j) {
  return {eigenvalue(grid, j), eigenvector(grid, j)};
}

SpectralBasis SpectralBasis::make(Grid grid) {
  SpectralBasis basis{grid, {}, {}};
  basis.lambda.resize(grid.interior_count());
  basis.c_factor.resize(grid.interior_count());
  for (int j = 1; j <= grid.interior_count(); ++j) {
    basis.c_factor[j - 1] = sch::c_factor(grid, j);
    basis.lambda[j - 1] = -static_cast<double>(j) * j * basis.c_factor[j - 1];
  }
  return basis;
}

SpectralCoeffs spectral_forward(const GridFunction& v) {
  SpectralCoeffs coeffs{v.grid(), std::vector<double>(v.size())};
  sine_transform::apply(v.grid().n, v.values(), coeffs.a);
  return coeffs;
}

GridFunction spectral_inverse(const SpectralCoeffs& coeffs) {
  std::vector<double> out(coeffs.a.size());
  sine_transform::apply(coeffs.grid.n, coeffs.a, out);
  return GridFunction(coeffs.grid, std::move(out));
}

GridFunction apply_laplacian(const GridFunction& v) {
  const Grid grid = v.grid();
  const int interior = grid.interior_count();
  const double scale = (grid.n / kPi) * (grid.n / kPi);
  std::vector<double> out(interior);
  for (int i = 0; i < interior; ++i) {
    const double left = (i > 0) ? v[i - 1] : 0.0;
    const double right = (i + 1 < interior) ? v[i + 1] : 0.0;
    out[i] = scale * (left - 2.0 * v[i] + right);
  }
  return GridFunction(grid, std::move(out));
}

GridFunction apply_frac_power(const GridFunction& v, double gamma) {
  if (gamma == 0.0) return v;
  return apply_spectral(v, [gamma](double lambda) { return std::pow(-lambda, gamma); });
}

GridFunction apply_semigroup(const GridFunction& v, double t) {
  if (t < 0.0) throw std::invalid_argument("semigroup time t must be >= 0");
  if (t == 0.0) return v;
  return apply_spectral(v, [t](double lambda) { return std::exp(-lambda * lambda * t); });
}

GridFunction apply_resolvent_power(const GridFunction& v, double tau, int iota) {
  if (tau <= 0.0) throw std::invalid_argument("resolvent step tau must be > 0");
  if (iota < 1) throw std::invalid_argument("resolvent power iota must be >= 1");
  return apply_spectral(v, [tau, iota](double lambda) {
    return std::pow(1.0 + tau * lambda * lambda, -iota);
  });
}

double norm_lp(const GridFunction& v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v.values()) m = std::max(m, std::abs(x));
    return m;
  }
  if (p < 1.0) throw std::invalid_argument("norm exponent p must be >= 1");
  const double weight = kPi / v.grid().n;
  double sum = 0.0;
  for (double x : v.values()) sum += std::pow(std::abs(x), p);
  return std::pow(weight * sum, 1.0 / p);
}

double norm_sobolev(const GridFunction& v, double gamma) {
  const Grid grid = v.grid();
  std::vector<double> coeffs(v.size());
  sine_transform::apply(grid.n, v.values(), coeffs);
  double sum = 0.0;
  for (int j = 1; j <= v.size(); ++j) {
    const double w = std::pow(-eigenvalue(grid, j), gamma);
    sum += w * w * coeffs[j - 1] * coeffs[j - 1];
  }
  return std::sqrt(kPi / grid.n * sum);
}

double inner_l2n(const GridFunction& a, const GridFunction& b) {
  require_match(a, b.grid());
  double sum = 0.0;
  for (int i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return kPi / a.grid().n * sum;
}

double interpolate_linear(const GridFunction& v, double x) {
  const Grid grid = v.grid();
  if (x < 0.0 || x > kPi) throw std::invalid_argument("interpolation point x outside [0, pi]");
  double t = x / grid.h;
  int cell = static_cast<int>(std::floor(t));
  double theta = t - cell;
  // Snap to nodes so that x = k*h evaluates to v_k exactly despite the
  // rounding in x/h.
  if (theta < 1e-9) {
    theta = 0.0;
  } else if (theta > 1.0 - 1e-9) {
    ++cell;
    theta = 0.0;
  }
  if (cell >= grid.n) return 0.0;
  const int interior = grid.interior_count();
  const double left = (cell >= 1 && cell <= interior) ? v[cell - 1] : 0.0;
  const double right = (cell + 1 >= 1 && cell + 1 <= interior) ? v[cell] : 0.0;
  return (1.0 - theta) * left + theta * right;
}

double kappa(const Grid& grid, double y) {
  if (y < 0.0 || y > kPi) throw std::invalid_argument("kappa argument y outside [0, pi]");
  int cell = static_cast<int>(std::floor(y / grid.h));
  if (cell > grid.n) cell = grid.n;
  return grid.h * cell;
}

}  // namespace sch
