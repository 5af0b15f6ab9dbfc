#include "dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "banded.hpp"

namespace sch {

namespace {

double smoothstep(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smoothstep_derivative(double t) { return 30.0 * t * t * (1.0 + t * (-2.0 + t)); }

double require_cutoff_radius(double R) {
  if (R < 1.0) throw std::invalid_argument("cut-off radius R must be >= 1");
  return R;
}

}  // namespace

double cutoff(double R, double x) {
  require_cutoff_radius(R);
  const double a = std::abs(x);
  if (a < R) return 1.0;
  if (a >= R + 1.0) return 0.0;
  return smoothstep(R + 1.0 - a);
}

double cutoff_derivative(double R, double x) {
  require_cutoff_radius(R);
  const double a = std::abs(x);
  if (a < R || a >= R + 1.0) return 0.0;
  const double d = -smoothstep_derivative(R + 1.0 - a);
  return x < 0.0 ? -d : d;
}

DriftSpec DriftSpec::cubic() {
  DriftSpec spec;
  spec.mode_ = Mode::cubic;
  spec.label_ = "cubic";
  return spec;
}

DriftSpec DriftSpec::cubic_localized(double R) {
  require_cutoff_radius(R);
  DriftSpec spec;
  spec.mode_ = Mode::cubic_localized;
  spec.R_ = R;
  spec.label_ = "cubic_localized";
  return spec;
}

DriftSpec DriftSpec::custom(std::function<double(double)> f,
                            std::function<double(double)> fprime,
                            std::string label) {
  if (!f || !fprime)
    throw std::invalid_argument("custom drift needs both f and f'");
  DriftSpec spec;
  spec.mode_ = Mode::custom;
  spec.f_ = std::move(f);
  spec.fprime_ = std::move(fprime);
  spec.label_ = std::move(label);
  return spec;
}

DriftSpec DriftSpec::zero() {
  return custom([](double) { return 0.0; }, [](double) { return 0.0; }, "zero");
}

double DriftSpec::value(double x) const {
  switch (mode_) {
    case Mode::cubic:
      return x * x * x - x;
    case Mode::cubic_localized:
      return (x * x * x - x) * cutoff(R_, x);
    case Mode::custom:
      return f_(x);
  }
  return 0.0;
}

double DriftSpec::derivative(double x) const {
  switch (mode_) {
    case Mode::cubic:
      return 3.0 * x * x - 1.0;
    case Mode::cubic_localized:
      return (3.0 * x * x - 1.0) * cutoff(R_, x) +
             (x * x * x - x) * cutoff_derivative(R_, x);
    case Mode::custom:
      return fprime_(x);
  }
  return 0.0;
}

DiffusionSpec DiffusionSpec::constant(double c) {
  DiffusionSpec spec;
  spec.sigma = [c](double) { return c; };
  spec.sigma_prime = [](double) { return 0.0; };
  spec.sup_bound = std::abs(c);
  spec.lipschitz = 0.0;
  // The non-degeneracy floor is a strict bound, so declare it just below
  // the attained constant.
  spec.sigma0 = std::abs(c) * (1.0 - 1e-9);
  spec.label = c == 0.0 ? "zero" : "constant";
  return spec;
}

DiffusionSpec DiffusionSpec::sinusoidal(double base, double amplitude) {
  DiffusionSpec spec;
  spec.sigma = [base, amplitude](double x) { return base + amplitude * std::sin(x); };
  spec.sigma_prime = [amplitude](double x) { return amplitude * std::cos(x); };
  spec.sup_bound = std::abs(base) + std::abs(amplitude);
  spec.lipschitz = std::abs(amplitude);
  spec.sigma0 = std::max(0.0, std::abs(base) - std::abs(amplitude));
  spec.label = "sinusoidal";
  return spec;
}

void DiffusionSpec::validate() const {
  if (!sigma || !sigma_prime)
    throw std::invalid_argument("diffusion spec needs sigma and sigma'");
  if (sigma0 < 0.0) throw std::invalid_argument("sigma0 must be >= 0");
  if (sigma0 > 0.0) {
    constexpr int kProbes = 10000;
    for (int i = 0; i < kProbes; ++i) {
      const double x = -20.0 + 40.0 * i / (kProbes - 1);
      if (!(std::abs(sigma(x)) > sigma0))
        throw std::invalid_argument(
            "declared non-degeneracy floor sigma0 violated at x=" + std::to_string(x));
    }
  }
}

void SchemeConfig::validate() const {
  if (n < 2) throw std::invalid_argument("scheme.n must be >= 2");
  if (m < 1) throw std::invalid_argument("scheme.m must be >= 1");
  if (!(T > 0.0)) throw std::invalid_argument("scheme.T must be > 0");
  if (!(solver.newton_tol > 0.0)) throw std::invalid_argument("scheme.newton_tol must be > 0");
  if (solver.max_iters < 1) throw std::invalid_argument("scheme.max_iters must be >= 1");
  if (!u0) throw std::invalid_argument("scheme.u0 missing");
  if (std::abs(u0(0.0)) > 1e-12 || std::abs(u0(kPi)) > 1e-12)
    throw std::invalid_argument("scheme.u0 must vanish at the boundary");
  diffusion.validate();
}

NonconvergenceError::NonconvergenceError(int step_, double residual_, int iterations_)
    : std::runtime_error("Newton iteration failed to reach tolerance (residual " +
                         std::to_string(residual_) + " after " +
                         std::to_string(iterations_) + " iterations" +
                         (step_ >= 0 ? ", step " + std::to_string(step_) : std::string()) +
                         "); tau may be too large for this configuration"),
      step(step_), residual(residual_), iterations(iterations_) {}

GridFunction eval_drift(const DriftSpec& drift, const GridFunction& v) {
  GridFunction out = v;
  for (int i = 0; i < out.size(); ++i) out[i] = drift.value(v[i]);
  return out;
}

std::vector<double> eval_diffusion(const DiffusionSpec& diffusion, const GridFunction& v) {
  std::vector<double> out(v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = diffusion.sigma(v[i]);
  return out;
}

namespace {

// r = x + tau A^2 x - tau A F(x) - b, returning the l^2_n norm of r.
double residual(const SchemeConfig& cfg, const GridFunction& x,
                std::span<const double> b, std::vector<double>& r) {
  const GridFunction Ax = apply_laplacian(x);
  const GridFunction AAx = apply_laplacian(Ax);
  const GridFunction AF = apply_laplacian(eval_drift(cfg.drift, x));
  const double tau = cfg.tau();
  double sum = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    r[i] = x[i] + tau * AAx[i] - tau * AF[i] - b[i];
    sum += r[i] * r[i];
  }
  return std::sqrt(kPi / cfg.n * sum);
}

// J = I + tau A^2 - tau A diag(f'(x)); pentadiagonal.
void fill_jacobian(const SchemeConfig& cfg, const GridFunction& x, BandedMatrix& J) {
  const int dim = x.size();
  const double tau = cfg.tau();
  const double a = (cfg.n / kPi) * (cfg.n / kPi);  // stencil scale n^2/pi^2
  J.zero();
  std::vector<double> fp(dim);
  for (int i = 0; i < dim; ++i) fp[i] = cfg.drift.derivative(x[i]);
  for (int row = 0; row < dim; ++row) {
    // tau * A^2 row: a^2 * [1, -4, 6, -4, 1], with the diagonal dropping to
    // 5 a^2 (or 4 a^2 when dim == 1) next to the Dirichlet boundary.
    const double a2 = a * a * tau;
    double diag = 4.0 * a2;
    if (row - 1 >= 0) diag += a2;
    if (row + 1 < dim) diag += a2;
    if (row - 2 >= 0) J.at(row, row - 2) += a2;
    if (row - 1 >= 0) J.at(row, row - 1) += -4.0 * a2;
    J.at(row, row) += diag + 1.0;
    if (row + 1 < dim) J.at(row, row + 1) += -4.0 * a2;
    if (row + 2 < dim) J.at(row, row + 2) += a2;
    // -tau * A diag(f'): row of A is a * [1, -2, 1].
    if (row - 1 >= 0) J.at(row, row - 1) += -tau * a * fp[row - 1];
    J.at(row, row) += 2.0 * tau * a * fp[row];
    if (row + 1 < dim) J.at(row, row + 1) += -tau * a * fp[row + 1];
  }
}

}  // namespace

GridFunction implicit_step(const GridFunction& U, std::span<const double> dbeta,
                           const SchemeConfig& cfg, StepStats* stats) {
  const int dim = U.size();
  if (static_cast<int>(dbeta.size()) != dim)
    throw std::invalid_argument("noise increment length must be n-1");

  // Right-hand side b = U + sqrt(n/pi) Sigma_n(U) dbeta.
  const double noise_scale = std::sqrt(cfg.n / kPi);
  std::vector<double> b(dim);
  for (int i = 0; i < dim; ++i)
    b[i] = U[i] + noise_scale * cfg.diffusion.sigma(U[i]) * dbeta[i];

  GridFunction x = U;
  std::vector<double> r(dim);
  BandedMatrix J(dim, 2, 2);
  double res = residual(cfg, x, b, r);
  int iterations = 0;
  while (res > cfg.solver.newton_tol) {
    if (iterations >= cfg.solver.max_iters || !std::isfinite(res))
      throw NonconvergenceError(-1, res, iterations);
    fill_jacobian(cfg, x, J);
    J.solve(r);  // r becomes the Newton correction
    for (int i = 0; i < dim; ++i) x[i] -= r[i];
    ++iterations;
    res = residual(cfg, x, b, r);
  }
  if (stats != nullptr) {
    stats->newton_iterations = iterations;
    stats->final_residual = res;
  }
  return x;
}

Trajectory simulate(const SchemeConfig& cfg, const NoiseSheet& sheet) {
  cfg.validate();
  if (sheet.n() != cfg.n || sheet.m() != cfg.m ||
      std::abs(sheet.T() - cfg.T) > 1e-12 * std::max(1.0, cfg.T))
    throw std::invalid_argument("noise sheet dimensions do not match the scheme config");

  Trajectory traj;
  traj.grid = cfg.grid();
  traj.T = cfg.T;
  traj.snapshots.reserve(cfg.m + 1);
  traj.step_stats.resize(cfg.m);
  traj.snapshots.push_back(GridFunction::sample(traj.grid, cfg.u0));
  for (int i = 0; i < cfg.m; ++i) {
    const std::vector<double> dbeta = sheet.beta_increment(i);
    GridFunction next = [&] {
      try {
        return implicit_step(traj.snapshots.back(), dbeta, cfg, &traj.step_stats[i]);
      } catch (const NonconvergenceError& err) {
        throw err.with_step(i);
      }
    }();
    for (int k = 0; k < next.size(); ++k)
      if (!std::isfinite(next[k])) throw NonconvergenceError(i, std::nan(""), 0);
    traj.snapshots.push_back(std::move(next));
  }
  return traj;
}

Trajectory semidiscrete_reference(const SchemeConfig& cfg, const NoiseSheet& sheet,
                                  int refinement) {
  if (refinement < 1 || (refinement & (refinement - 1)) != 0)
    throw std::invalid_argument("refinement must be a power of two");
  if (sheet.m() != cfg.m * refinement)
    throw std::invalid_argument("sheet must carry m * refinement time steps");
  SchemeConfig fine = cfg;
  fine.m = cfg.m * refinement;
  Trajectory full = simulate(fine, sheet);
  if (refinement == 1) return full;

  Trajectory coarse;
  coarse.grid = full.grid;
  coarse.T = full.T;
  for (int i = 0; i <= cfg.m; ++i) coarse.snapshots.push_back(full.snapshots[i * refinement]);
  // Aggregate per-coarse-step stats: worst residual, summed iterations.
  coarse.step_stats.resize(cfg.m);
  for (int i = 0; i < cfg.m; ++i) {
    StepStats agg;
    for (int j = i * refinement; j < (i + 1) * refinement; ++j) {
      agg.newton_iterations += full.step_stats[j].newton_iterations;
      agg.final_residual = std::max(agg.final_residual, full.step_stats[j].final_residual);
    }
    coarse.step_stats[i] = agg;
  }
  return coarse;
}

}  // namespace sch
