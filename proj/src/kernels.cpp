#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "quadrature.hpp"

namespace sch {

namespace {

constexpr double kTwoOverPi = 2.0 / kPi;
constexpr double kPhiScale = 0.7978845608028654;  // sqrt(2/pi)

double phi(int j, double x) { return kPhiScale * std::sin(j * x); }

// Discrete eigenstructure plus the phi_j values at grid nodes, with exact
// zeros at the Dirichlet nodes k = 0 and k = n.
struct DiscreteBasis {
  int n;
  double h;
  std::vector<double> lambda;    // lambda_{j,n}, j = 1..n-1
  std::vector<double> phi_node;  // phi_node[(j-1)*(n+1) + k] = phi_j(kh)

  explicit DiscreteBasis(int n_) : n(n_), h(kPi / n_) {
    const Grid grid = Grid::make(n);
    lambda.resize(n - 1);
    phi_node.assign(static_cast<std::size_t>(n - 1) * (n + 1), 0.0);
    for (int j = 1; j < n; ++j) {
      lambda[j - 1] = eigenvalue(grid, j);
      for (int k = 1; k < n; ++k)
        phi_node[static_cast<std::size_t>(j - 1) * (n + 1) + k] = phi(j, k * h);
    }
  }

  double at_node(int j, int k) const {
    return phi_node[static_cast<std::size_t>(j - 1) * (n + 1) + k];
  }

  // phi_{j,n}(x): polygonal interpolant of phi_j between grid nodes.
  double interp(int j, double x) const {
    double t = x / h;
    int cell = static_cast<int>(std::floor(t));
    double theta = t - cell;
    if (theta < 1e-9) theta = 0.0;
    else if (theta > 1.0 - 1e-9) { ++cell; theta = 0.0; }
    if (cell < 0) { cell = 0; theta = 0.0; }
    if (cell >= n) return 0.0;
    return (1.0 - theta) * at_node(j, cell) + theta * at_node(j, cell + 1);
  }
};

int exact_jmax(double s, int J) {
  if (s <= 0.0) return J;
  // Terms with j^4 s - s > 45 are below e^-45 of the leading one.
  const double j = std::pow((45.0 + s) / s, 0.25);
  return std::min(J, std::max(1, static_cast<int>(std::ceil(j))));
}

}  // namespace

KernelSpec KernelSpec::exact(int J, int order) {
  if (J < 1) throw std::invalid_argument("exact kernel truncation J must be >= 1");
  KernelSpec spec;
  spec.family = Family::exact;
  spec.truncation = J;
  spec.order = order;
  return spec;
}

KernelSpec KernelSpec::semi(int n, int order) {
  if (n < 2) throw std::invalid_argument("semi kernel needs n >= 2");
  KernelSpec spec;
  spec.family = Family::semi;
  spec.n = n;
  spec.order = order;
  return spec;
}

KernelSpec KernelSpec::full(int n, double tau, int order) {
  if (n < 2) throw std::invalid_argument("full kernel needs n >= 2");
  if (!(tau > 0.0)) throw std::invalid_argument("full kernel needs tau > 0");
  KernelSpec spec;
  spec.family = Family::full;
  spec.n = n;
  spec.tau = tau;
  spec.order = order;
  return spec;
}

double kernel_value(const KernelSpec& spec, double t, double x, double y) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel time t must be > 0");
  if (x < 0.0 || x > kPi || y < 0.0 || y > kPi)
    throw std::invalid_argument("kernel arguments x, y must lie in [0, pi]");
  if (spec.order != 0 && spec.order != 1)
    throw std::invalid_argument("kernel order must be 0 or 1");

  if (spec.family == KernelSpec::Family::exact) {
    double sum = 0.0;
    for (int j = 1; j <= spec.truncation; ++j) {
      const double lam = -static_cast<double>(j) * j;
      const double ex = lam * lam * t;
      if (ex > 700.0) break;
      double term = std::exp(-ex) * phi(j, x) * phi(j, y);
      if (spec.order == 1) term *= lam;
      sum += term;
    }
    return sum;
  }

  const DiscreteBasis basis(spec.n);
  const Grid grid = Grid::make(spec.n);
  const double ky = kappa(grid, y);
  int exponent = 0;
  if (spec.family == KernelSpec::Family::full) {
    if (t < spec.tau - 1e-12 * spec.tau)
      throw std::invalid_argument("full kernel requires t >= tau");
    exponent = static_cast<int>(std::floor(t / spec.tau + 1e-9));
  }
  double sum = 0.0;
  for (int j = 1; j < spec.n; ++j) {
    const double lam = basis.lambda[j - 1];
    double weight;
    if (spec.family == KernelSpec::Family::semi) {
      const double ex = lam * lam * t;
      weight = ex > 700.0 ? 0.0 : std::exp(-ex);
    } else {
      weight = std::pow(1.0 + spec.tau * lam * lam, -exponent);
    }
    double term = weight * basis.interp(j, x) * phi(j, ky);
    if (spec.order == 1) term *= lam;
    sum += term;
  }
  return sum;
}

double exact_tail_bound(int J, double t, int order) {
  if (!(t > 0.0)) throw std::invalid_argument("tail bound needs t > 0");
  // sum_{j>J} j^{2 order} e^{-j^4 t} <= int_J^inf z^{2 order} e^{-z^4 t} dz,
  // evaluated by graded quadrature over the decaying range.
  const double upper = std::pow(750.0 / t, 0.25);
  if (upper <= J) return 0.0;
  const auto integrand = [t, order](double z) {
    const double ex = z * z * z * z * t;
    const double w = order == 1 ? z * z : 1.0;
    return ex > 700.0 ? 0.0 : w * std::exp(-ex);
  };
  return kTwoOverPi * integrate_graded(integrand, J, upper, true, 64, 1e-10);
}

double kernel_error_space(int n, double T, double x, int order) {
  if (n < 2) throw std::invalid_argument("kernel_error_space needs n >= 2");
  if (T < 0.0) throw std::invalid_argument("kernel_error_space needs T >= 0");
  if (order != 0 && order != 1) throw std::invalid_argument("order must be 0 or 1");
  if (T == 0.0) return 0.0;

  const int J = 8 * n;
  const DiscreteBasis basis(n);
  const double h = basis.h;
  const int q = 16 * J / n;  // y-subintervals per cell; 16*max(J,n) nodes total
  const double dy = h / q;

  // phi weights at the probe point.
  std::vector<double> phi_x_exact(J + 1), phi_x_disc(n);
  for (int j = 1; j <= J; ++j) phi_x_exact[j] = phi(j, x);
  for (int j = 1; j < n; ++j) phi_x_disc[j] = basis.interp(j, x);

  // sin(j * y) at every y node, node index = cell * (q+1) + i.
  const int nodes_per_cell = q + 1;
  const std::size_t node_count = static_cast<std::size_t>(n) * nodes_per_cell;
  std::vector<double> sintab(static_cast<std::size_t>(J) * node_count);
  std::vector<double> ynode(node_count);
  for (int cell = 0; cell < n; ++cell)
    for (int i = 0; i <= q; ++i)
      ynode[static_cast<std::size_t>(cell) * nodes_per_cell + i] = cell * h + i * dy;
  for (int j = 1; j <= J; ++j)
    for (std::size_t p = 0; p < node_count; ++p)
      sintab[static_cast<std::size_t>(j - 1) * node_count + p] = std::sin(j * ynode[p]);

  std::vector<double> coeff_exact(J + 1), cellval(n);
  const auto y_integral = [&](double s) {
    // Exact-kernel coefficients (including phi_j(x) and the sqrt(2/pi) of
    // the y factor); adaptive truncation once terms are below e^-45.
    const int jmax = exact_jmax(s, J);
    for (int j = 1; j <= jmax; ++j) {
      const double lam = -static_cast<double>(j) * j;
      const double ex = lam * lam * s;
      double w = ex > 700.0 ? 0.0 : std::exp(-ex);
      if (order == 1) w *= lam;
      coeff_exact[j] = w * phi_x_exact[j] * kPhiScale;
    }
    // Per-cell constants of the discrete kernel.
    for (int cell = 0; cell < n; ++cell) {
      double d = 0.0;
      for (int j = 1; j < n; ++j) {
        const double lam = basis.lambda[j - 1];
        const double ex = lam * lam * s;
        double w = ex > 700.0 ? 0.0 : std::exp(-ex);
        if (order == 1) w *= lam;
        d += w * phi_x_disc[j] * basis.at_node(j, cell);  // phi_j(kappa) = phi_j(cell*h)
      }
      cellval[cell] = d;
    }
    double total = 0.0;
    for (int cell = 0; cell < n; ++cell) {
      double cellsum = 0.0;
      for (int i = 0; i <= q; ++i) {
        const std::size_t p = static_cast<std::size_t>(cell) * nodes_per_cell + i;
        double e = 0.0;
        for (int j = 1; j <= jmax; ++j)
          e += coeff_exact[j] * sintab[static_cast<std::size_t>(j - 1) * node_count + p];
        const double diff = cellval[cell] - e;
        const double val = order == 0 ? diff * diff : std::abs(diff);
        cellsum += (i == 0 || i == q) ? 0.5 * val : val;
      }
      total += cellsum * dy;
    }
    return total;
  };

  return integrate_graded(y_integral, 0.0, T, /*singular_at_left=*/true);
}

double kernel_error_time(int n, double tau, double T, double x, int order) {
  if (n < 2) throw std::invalid_argument("kernel_error_time needs n >= 2");
  if (!(tau > 0.0) || !(T > 0.0))
    throw std::invalid_argument("kernel_error_time needs tau > 0 and T > 0");
  const int m = static_cast<int>(std::llround(T / tau));
  if (m < 1 || std::abs(m * tau - T) > 1e-9 * T)
    throw std::invalid_argument("tau must divide T");
  if (order != 0 && order != 1) throw std::invalid_argument("order must be 0 or 1");

  const DiscreteBasis basis(n);
  const double h = basis.h;
  std::vector<double> phi_x(n);
  for (int j = 1; j < n; ++j) phi_x[j] = basis.interp(j, x);

  std::vector<double> coeff(n);
  // Both kernels share the piecewise-constant y-basis {phi_j(kappa_n(y))},
  // so the y-integral reduces exactly: Parseval for the squared case, a
  // cell sum of h |.| for the absolute one.
  const auto y_integral = [&](double s, int exponent) {
    for (int j = 1; j < n; ++j) {
      const double lam = basis.lambda[j - 1];
      const double ex = lam * lam * s;
      const double semi = ex > 700.0 ? 0.0 : std::exp(-ex);
      const double full = std::pow(1.0 + tau * lam * lam, -exponent);
      double c = (full - semi) * phi_x[j];
      if (order == 1) c *= lam;
      coeff[j] = c;
    }
    if (order == 0) {
      double sum = 0.0;
      for (int j = 1; j < n; ++j) sum += coeff[j] * coeff[j];
      return sum;
    }
    double sum = 0.0;
    for (int k = 1; k < n; ++k) {
      double v = 0.0;
      for (int j = 1; j < n; ++j) v += coeff[j] * basis.at_node(j, k);
      sum += std::abs(v);
    }
    return h * sum;
  };

  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    // On [t_i, t_{i+1}) the floor exponent of G^{n,tau}_{s+tau} is i+1.
    const double a = i * tau, b = (i + 1) * tau;
    const auto slice = [&](double s) { return y_integral(s, i + 1); };
    total += integrate_graded(slice, a, b, /*singular_at_left=*/true, 64, 1e-8);
  }
  return total;
}

RegularityProbe kernel_regularity_probe(int n, double T, double x1, double x2,
                                        double s, double t, int order) {
  if (n < 2) throw std::invalid_argument("regularity probe needs n >= 2");
  if (!(0.0 <= s && s <= t && t <= T))
    throw std::invalid_argument("regularity probe needs 0 <= s <= t <= T");
  if (x1 < 0.0 || x1 > kPi || x2 < 0.0 || x2 > kPi)
    throw std::invalid_argument("probe points must lie in [0, pi]");
  if (order != 0 && order != 1) throw std::invalid_argument("order must be 0 or 1");

  const DiscreteBasis basis(n);
  const double h = basis.h;
  std::vector<double> p1(n), p2(n);
  for (int j = 1; j < n; ++j) {
    p1[j] = basis.interp(j, x1);
    p2[j] = basis.interp(j, x2);
  }

  // y-integral of |sum_j c_j phi_j(kappa_n(y))|^(2 or 1), exact.
  const auto y_norm = [&](const std::vector<double>& c) {
    if (order == 0) {
      double sum = 0.0;
      for (int j = 1; j < n; ++j) sum += c[j] * c[j];
      return sum;
    }
    double sum = 0.0;
    for (int k = 1; k < n; ++k) {
      double v = 0.0;
      for (int j = 1; j < n; ++j) v += c[j] * basis.at_node(j, k);
      sum += std::abs(v);
    }
    return h * sum;
  };

  std::vector<double> c(n);
  const auto weight = [&](int j, double w) {
    const double lam = basis.lambda[j - 1];
    const double ex = lam * lam * w;
    double v = ex > 700.0 ? 0.0 : std::exp(-ex);
    if (order == 1) v *= lam;
    return v;
  };

  RegularityProbe probe;
  // Spatial difference over the full window [0, t], kernel age w = t - r.
  probe.spatial = integrate_graded(
      [&](double w) {
        for (int j = 1; j < n; ++j) c[j] = weight(j, w) * (p1[j] - p2[j]);
        return y_norm(c);
      },
      0.0, t, true);
  // Temporal difference on [0, s] (ages w and w + (t - s)) plus the tail
  // window (s, t] of the newer kernel alone.
  const double gap = t - s;
  probe.temporal = integrate_graded(
      [&](double w) {
        for (int j = 1; j < n; ++j) c[j] = (weight(j, w + gap) - weight(j, w)) * p1[j];
        return y_norm(c);
      },
      0.0, s, true);
  probe.temporal += integrate_graded(
      [&](double w) {
        for (int j = 1; j < n; ++j) c[j] = weight(j, w) * p1[j];
        return y_norm(c);
      },
      0.0, gap, true);
  return probe;
}

}  // namespace sch
