#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dynamics.hpp"

namespace sch {

enum class StudyAxis { spatial, temporal };

// Coupled Monte Carlo strong-error study. Noise is sampled once per path at
// the finest resolution and coarsened exactly down the ladder, so every
// level sees the same Brownian sheet.
struct StudyPlan {
  SchemeConfig base;          // n (temporal axis) resp. m, T (spatial axis) fixed
  StudyAxis axis = StudyAxis::spatial;
  std::vector<int> levels;    // n values (spatial) or m values (temporal)
  int reference_level = 0;    // strictly finer than every level
  int paths = 0;
  double zeta = 1.0;          // error exponent, [1, 2]; 2 is diagnostic only
  std::uint64_t seed = 0;
  std::vector<double> probe_points{kPi / 2.0};

  void validate() const;
};

struct LevelResult {
  int level = 0;
  double scale = 0.0;  // h for spatial levels, tau for temporal ones
  double error = 0.0;  // max over probes of the L^zeta(Omega) error at T
  double std_error = 0.0;
};

struct RateReport {
  std::vector<LevelResult> levels;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_ci_lo = 0.0;  // bootstrap 2.5% / 97.5% percentiles
  double slope_ci_hi = 0.0;
  int failed_paths = 0;
  int paths = 0;
  double max_newton_residual = 0.0;
  int max_newton_iterations = 0;
};

class StudyError : public std::runtime_error {
 public:
  explicit StudyError(const std::string& what) : std::runtime_error(what) {}
};

// Least squares on (log scale, log error); error ~ scale^slope.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit fit_rate(std::span<const std::pair<double, double>> points);

RateReport run_study(const StudyPlan& plan, int workers = 0);

// Monte Carlo moment table for E || (-A_n)^{1/2} U^i ||^p_{l^2_n}: the
// maximum over snapshot times and the final-time value, per config.
struct MomentRow {
  int n = 0;
  int m = 0;
  double max_over_times = 0.0;
  double at_final_time = 0.0;
  double final_std_error = 0.0;  // bootstrap
  double max_newton_residual = 0.0;
};

std::vector<MomentRow> moment_sweep(std::span<const SchemeConfig> configs, int p,
                                    int paths, std::uint64_t seed, int workers = 0);

}  // namespace sch
