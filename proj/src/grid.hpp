#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sch {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Uniform Dirichlet mesh on (0, pi): interior points k*h, k = 1..n-1,
// with h = pi/n. Immutable; all operations below are pure.
struct Grid {
  int n = 0;
  double h = 0.0;

  static Grid make(int n);  // throws std::invalid_argument if n < 2
  int interior_count() const { return n - 1; }
  double point(int k) const { return k * h; }  // k = 0..n
  bool operator==(const Grid& other) const { return n == other.n; }
};

// Real field sampled at the interior points; values[k-1] lives at x = k*h.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values);
  static GridFunction zero(Grid grid);
  static GridFunction sample(Grid grid, const std::function<double(double)>& f);

  const Grid& grid() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

// Eigenvalues lambda_{j,n} = -j^2 c_{j,n} of the discrete Dirichlet
// Laplacian, with c_{j,n} = sin^2(j pi / 2n) / (j pi / 2n)^2. The closed
// form is used everywhere; the matrix is never diagonalized numerically.
struct SpectralBasis {
  Grid grid;
  std::vector<double> lambda;    // lambda[j-1] = lambda_{j,n}, j = 1..n-1
  std::vector<double> c_factor;  // c_factor[j-1] = c_{j,n}

  static SpectralBasis make(Grid grid);
};

struct SpectralCoeffs {
  Grid grid;
  std::vector<double> a;  // a[j-1] = <v, e_j> (Euclidean inner product)
};

double eigenvalue(const Grid& grid, int j);  // lambda_{j,n}, 1 <= j <= n-1
double c_factor(const Grid& grid, int j);    // c_{j,n}

// Orthonormal eigenvector e_j, e_j(k) = sqrt(2/n) sin(j k pi / n).
GridFunction eigenvector(const Grid& grid, int j);

std::pair<double, GridFunction> eigen_pair(const Grid& grid, int j);

SpectralCoeffs spectral_forward(const GridFunction& v);
GridFunction spectral_inverse(const SpectralCoeffs& coeffs);

// Second-difference stencil (A_n v)_k = (n^2/pi^2)(v_{k-1} - 2 v_k + v_{k+1})
// with Dirichlet closure v_0 = v_n = 0.
GridFunction apply_laplacian(const GridFunction& v);

// (-A_n)^gamma v, computed spectrally. Any real gamma; the spectrum of
// -A_n is strictly positive so negative powers are defined.
GridFunction apply_frac_power(const GridFunction& v, double gamma);

// exp(-A_n^2 t) v. Requires t >= 0; contracts the l^2_n norm.
GridFunction apply_semigroup(const GridFunction& v, double t);

// (I + tau A_n^2)^{-iota} v. Requires tau > 0, iota >= 1.
GridFunction apply_resolvent_power(const GridFunction& v, double tau, int iota);

// Discrete L^p norm ((pi/n) sum |v_k|^p)^(1/p); p may be infinity.
double norm_lp(const GridFunction& v, double p);

// ||(-A_n)^gamma v||_{l^2_n}.
double norm_sobolev(const GridFunction& v, double gamma);

// (pi/n) sum a_k b_k.
double inner_l2n(const GridFunction& a, const GridFunction& b);

// Polygonal interpolant Pi_n(v)(x) with zero boundary values, x in [0, pi].
double interpolate_linear(const GridFunction& v, double x);

// kappa_n(y) = h * floor(y/h), y in [0, pi].
double kappa(const Grid& grid, double y);

}  // namespace sch
