#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "noise.hpp"

namespace sch {

// Smooth even cut-off: 1 on |x| < R, 0 on |x| >= R+1, quintic smoothstep
// in between. |K_R| <= 1 and |K_R'| <= 15/8. Requires R >= 1.
double cutoff(double R, double x);
double cutoff_derivative(double R, double x);

// Drift coefficient f of the nonlinearity Delta f(u). The double-well drift
// is f(x) = x^3 - x; the localized variant multiplies it by the cut-off K_R.
class DriftSpec {
 public:
  enum class Mode { cubic, cubic_localized, custom };

  static DriftSpec cubic();
  static DriftSpec cubic_localized(double R);  // requires R >= 1
  static DriftSpec custom(std::function<double(double)> f,
                          std::function<double(double)> fprime,
                          std::string label = "custom");
  static DriftSpec zero();  // custom f == 0, for linear reference runs

  Mode mode() const { return mode_; }
  double R() const { return R_; }
  const std::string& label() const { return label_; }
  double value(double x) const;
  double derivative(double x) const;

 private:
  DriftSpec() = default;
  Mode mode_ = Mode::cubic;
  double R_ = 0.0;
  std::string label_ = "cubic";
  std::function<double(double)> f_, fprime_;
};

// Diffusion coefficient sigma with its declared bounds. sigma0 is the
// uniform non-degeneracy floor; when positive it is spot-checked on a
// 10^4-point probe grid by validate().
struct DiffusionSpec {
  std::function<double(double)> sigma;
  std::function<double(double)> sigma_prime;
  double sup_bound = 0.0;
  double lipschitz = 0.0;
  double sigma0 = 0.0;
  std::string label = "custom";

  static DiffusionSpec constant(double c);
  static DiffusionSpec zero() { return constant(0.0); }
  // base + amplitude * sin(x); the default experiment uses (0.5, 0.25).
  static DiffusionSpec sinusoidal(double base, double amplitude);
  static DiffusionSpec default_experiment() { return sinusoidal(0.5, 0.25); }

  void validate() const;
};

struct SolverOptions {
  double newton_tol = 1e-10;  // l^2_n residual tolerance
  int max_iters = 50;
};

// Full specification of one run of the fully discrete scheme
//   U^{i+1} - U^i + tau A_n^2 U^{i+1}
//     = tau A_n F_n(U^{i+1}) + sqrt(n/pi) Sigma_n(U^i) (beta_{i+1} - beta_i).
struct SchemeConfig {
  int n = 0;
  int m = 0;
  double T = 0.0;
  DriftSpec drift = DriftSpec::cubic();
  DiffusionSpec diffusion = DiffusionSpec::default_experiment();
  std::function<double(double)> u0 = [](double x) { return std::sin(x); };
  std::string u0_label = "sin";
  SolverOptions solver;

  Grid grid() const { return Grid::make(n); }
  double tau() const { return T / m; }
  void validate() const;
};

class NonconvergenceError : public std::runtime_error {
 public:
  NonconvergenceError(int step, double residual, int iterations);
  int step;  // -1 when the failing step index is not known yet
  double residual;
  int iterations;
  NonconvergenceError with_step(int s) const { return {s, residual, iterations}; }
};

struct StepStats {
  int newton_iterations = 0;
  double final_residual = 0.0;
};

struct Trajectory {
  Grid grid;
  double T = 0.0;
  std::vector<GridFunction> snapshots;   // U^0 .. U^m
  std::vector<StepStats> step_stats;     // one per step

  int steps() const { return static_cast<int>(step_stats.size()); }
  // Polygonal value of the final (or i-th) snapshot at x.
  double value_at(int i, double x) const { return interpolate_linear(snapshots[i], x); }

  double worst_residual() const {
    double r = 0.0;
    for (const StepStats& s : step_stats) r = std::max(r, s.final_residual);
    return r;
  }
};

// Componentwise coefficient evaluations of Eq-level vectors F_n and the
// diagonal of Sigma_n.
GridFunction eval_drift(const DriftSpec& drift, const GridFunction& v);
std::vector<double> eval_diffusion(const DiffusionSpec& diffusion, const GridFunction& v);

// One backward-Euler step: solves
//   U' + tau A_n^2 U' - tau A_n F_n(U') = U + sqrt(n/pi) Sigma_n(U) dbeta
// by Newton iteration with a pentadiagonal LU inner solve. Initial guess U;
// throws NonconvergenceError when the residual fails to reach
// solver.newton_tol within solver.max_iters iterations.
GridFunction implicit_step(const GridFunction& U, std::span<const double> dbeta,
                           const SchemeConfig& cfg, StepStats* stats = nullptr);

// Runs the scheme over the full sheet. The sheet dimensions must match
// (n, m, T). Deterministic given (cfg, sheet).
Trajectory simulate(const SchemeConfig& cfg, const NoiseSheet& sheet);

// Semi-discrete proxy: runs the same scheme with time step tau/refinement
// on the finer sheet (sheet.m == cfg.m * refinement) and subsamples the
// snapshots back to the coarse time grid.
Trajectory semidiscrete_reference(const SchemeConfig& cfg, const NoiseSheet& sheet,
                                  int refinement);

}  // namespace sch
