#include "stochch.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "density.hpp"
#include "dynamics.hpp"
#include "experiment.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "noise.hpp"
#include "rate_study.hpp"
#include "sine_transform.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

// Translates C++ exceptions at the boundary into status codes.
template <typename Fn>
stochch_status guarded(Fn&& fn) {
  try {
    fn();
    return STOCHCH_OK;
  } catch (const sch::ConfigError& err) {
    set_error(err.what());
    return STOCHCH_ERR_INVALID_ARGUMENT;
  } catch (const sch::NonconvergenceError& err) {
    set_error(err.what());
    return STOCHCH_ERR_NO_CONVERGENCE;
  } catch (const sch::StudyError& err) {
    set_error(err.what());
    return STOCHCH_ERR_NO_CONVERGENCE;
  } catch (const std::invalid_argument& err) {
    set_error(err.what());
    return STOCHCH_ERR_INVALID_ARGUMENT;
  } catch (const std::ios_base::failure& err) {
    set_error(err.what());
    return STOCHCH_ERR_IO;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return STOCHCH_ERR_INTERNAL;
  } catch (const std::exception& err) {
    set_error(err.what());
    return STOCHCH_ERR_INTERNAL;
  }
}

stochch_status require(bool cond, const char* message) {
  if (cond) return STOCHCH_OK;
  set_error(message);
  return STOCHCH_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct stochch_grid {
  sch::Grid grid;
};
struct stochch_sheet {
  sch::NoiseSheet sheet;
};
struct stochch_scheme {
  sch::SchemeConfig config;
};
struct stochch_trajectory {
  sch::Trajectory trajectory;
};

extern "C" {

const char* stochch_version(void) { return sch::library_version(); }

const char* stochch_last_error(void) { return g_last_error.c_str(); }

/* ------------------------------------------------------------------ grid */

stochch_status stochch_grid_create(int n, stochch_grid** out) {
  if (auto st = require(out != nullptr, "out pointer is null")) return st;
  return guarded([&] { *out = new stochch_grid{sch::Grid::make(n)}; });
}

void stochch_grid_destroy(stochch_grid* grid) { delete grid; }

int stochch_grid_size(const stochch_grid* grid) { return grid->grid.n; }
int stochch_grid_interior_count(const stochch_grid* grid) {
  return grid->grid.interior_count();
}
double stochch_grid_mesh_width(const stochch_grid* grid) { return grid->grid.h; }

namespace {

sch::GridFunction wrap(const stochch_grid* grid, const double* in) {
  return sch::GridFunction(
      grid->grid, std::vector<double>(in, in + grid->grid.interior_count()));
}

void unwrap(const sch::GridFunction& v, double* out) {
  std::memcpy(out, v.values().data(), sizeof(double) * v.size());
}

}  // namespace

stochch_status stochch_grid_eigen_pair(const stochch_grid* grid, int j,
                                       double* eigenvalue, double* eigenvector) {
  if (auto st = require(grid && eigenvalue, "grid/eigenvalue pointer is null")) return st;
  return guarded([&] {
    *eigenvalue = sch::eigenvalue(grid->grid, j);
    if (eigenvector != nullptr) unwrap(sch::eigenvector(grid->grid, j), eigenvector);
  });
}

stochch_status stochch_grid_spectral_transform(const stochch_grid* grid,
                                               const double* in, double* out,
                                               int forward) {
  (void)forward;  // the orthonormal DST-I is involutory
  if (auto st = require(grid && in && out, "null pointer argument")) return st;
  return guarded([&] {
    std::vector<double> result(grid->grid.interior_count());
    sch::sine_transform::apply(grid->grid.n, {in, result.size()}, result);
    std::memcpy(out, result.data(), sizeof(double) * result.size());
  });
}

#define STOCHCH_GRID_OP(name, expr)                                          \
  if (auto st = require(grid && in && out, "null pointer argument")) return st; \
  return guarded([&] {                                                       \
    const sch::GridFunction v = wrap(grid, in);                              \
    unwrap((expr), out);                                                     \
  })

stochch_status stochch_grid_apply_laplacian(const stochch_grid* grid, const double* in,
                                            double* out) {
  STOCHCH_GRID_OP(laplacian, sch::apply_laplacian(v));
}

stochch_status stochch_grid_apply_frac_power(const stochch_grid* grid, double gamma,
                                             const double* in, double* out) {
  STOCHCH_GRID_OP(frac, sch::apply_frac_power(v, gamma));
}

stochch_status stochch_grid_apply_semigroup(const stochch_grid* grid, double t,
                                            const double* in, double* out) {
  STOCHCH_GRID_OP(semigroup, sch::apply_semigroup(v, t));
}

stochch_status stochch_grid_apply_resolvent_power(const stochch_grid* grid, double tau,
                                                  int iota, const double* in,
                                                  double* out) {
  STOCHCH_GRID_OP(resolvent, sch::apply_resolvent_power(v, tau, iota));
}

#undef STOCHCH_GRID_OP

stochch_status stochch_grid_norm_lp(const stochch_grid* grid, const double* in,
                                    double p, double* out) {
  if (auto st = require(grid && in && out, "null pointer argument")) return st;
  return guarded([&] { *out = sch::norm_lp(wrap(grid, in), p); });
}

stochch_status stochch_grid_norm_sobolev(const stochch_grid* grid, const double* in,
                                         double gamma, double* out) {
  if (auto st = require(grid && in && out, "null pointer argument")) return st;
  return guarded([&] { *out = sch::norm_sobolev(wrap(grid, in), gamma); });
}

stochch_status stochch_grid_interpolate(const stochch_grid* grid, const double* in,
                                        double x, double* out) {
  if (auto st = require(grid && in && out, "null pointer argument")) return st;
  return guarded([&] { *out = sch::interpolate_linear(wrap(grid, in), x); });
}

stochch_status stochch_grid_kappa(const stochch_grid* grid, double y, double* out) {
  if (auto st = require(grid && out, "null pointer argument")) return st;
  return guarded([&] { *out = sch::kappa(grid->grid, y); });
}

/* ----------------------------------------------------------------- noise */

stochch_status stochch_sheet_sample(uint64_t seed, int n, int m, double T,
                                    stochch_sheet** out) {
  if (auto st = require(out != nullptr, "out pointer is null")) return st;
  return guarded([&] { *out = new stochch_sheet{sch::NoiseSheet::sample(seed, n, m, T)}; });
}

void stochch_sheet_destroy(stochch_sheet* sheet) { delete sheet; }

int stochch_sheet_space_cells(const stochch_sheet* sheet) { return sheet->sheet.n(); }
int stochch_sheet_time_steps(const stochch_sheet* sheet) { return sheet->sheet.m(); }
double stochch_sheet_horizon(const stochch_sheet* sheet) { return sheet->sheet.T(); }

stochch_status stochch_sheet_cell(const stochch_sheet* sheet, int i, int k,
                                  double* out) {
  if (auto st = require(sheet && out, "null pointer argument")) return st;
  if (auto st = require(i >= 0 && i < sheet->sheet.m() && k >= 0 && k < sheet->sheet.n(),
                        "cell index out of range"))
    return st;
  *out = sheet->sheet.cell(i, k);
  return STOCHCH_OK;
}

stochch_status stochch_sheet_beta_increment(const stochch_sheet* sheet, int i,
                                            double* out) {
  if (auto st = require(sheet && out, "null pointer argument")) return st;
  return guarded([&] {
    const std::vector<double> beta = sheet->sheet.beta_increment(i);
    std::memcpy(out, beta.data(), sizeof(double) * beta.size());
  });
}

stochch_status stochch_sheet_coarsen_space(const stochch_sheet* sheet,
                                           stochch_sheet** out) {
  if (auto st = require(sheet && out, "null pointer argument")) return st;
  return guarded([&] { *out = new stochch_sheet{sheet->sheet.coarsen_space()}; });
}

stochch_status stochch_sheet_coarsen_time(const stochch_sheet* sheet,
                                          stochch_sheet** out) {
  if (auto st = require(sheet && out, "null pointer argument")) return st;
  return guarded([&] { *out = new stochch_sheet{sheet->sheet.coarsen_time()}; });
}

stochch_status stochch_sheet_write_csv(const stochch_sheet* sheet, const char* path) {
  if (auto st = require(sheet && path, "null pointer argument")) return st;
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure(std::string("cannot open ") + path);
    sheet->sheet.write_csv(out);
  });
}

stochch_status stochch_sheet_read_csv(const char* path, stochch_sheet** out) {
  if (auto st = require(path && out, "null pointer argument")) return st;
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure(std::string("cannot open ") + path);
    *out = new stochch_sheet{sch::NoiseSheet::read_csv(in)};
  });
}

/* ---------------------------------------------------------------- scheme */

stochch_status stochch_scheme_create_json(const char* json_text, stochch_scheme** out) {
  if (auto st = require(json_text && out, "null pointer argument")) return st;
  return guarded([&] {
    *out = new stochch_scheme{sch::parse_scheme_fragment(json_text)};
  });
}

void stochch_scheme_destroy(stochch_scheme* scheme) { delete scheme; }

stochch_status stochch_scheme_set_custom_drift(stochch_scheme* scheme,
                                               stochch_scalar_fn f,
                                               stochch_scalar_fn fprime, void* ctx) {
  if (auto st = require(scheme && f && fprime, "null pointer argument")) return st;
  return guarded([&] {
    scheme->config.drift = sch::DriftSpec::custom(
        [f, ctx](double x) { return f(x, ctx); },
        [fprime, ctx](double x) { return fprime(x, ctx); });
  });
}

stochch_status stochch_scheme_set_custom_diffusion(stochch_scheme* scheme,
                                                   stochch_scalar_fn sigma,
                                                   stochch_scalar_fn sigma_prime,
                                                   void* ctx, double sup_bound,
                                                   double lipschitz, double sigma0) {
  if (auto st = require(scheme && sigma && sigma_prime, "null pointer argument")) return st;
  return guarded([&] {
    sch::DiffusionSpec spec;
    spec.sigma = [sigma, ctx](double x) { return sigma(x, ctx); };
    spec.sigma_prime = [sigma_prime, ctx](double x) { return sigma_prime(x, ctx); };
    spec.sup_bound = sup_bound;
    spec.lipschitz = lipschitz;
    spec.sigma0 = sigma0;
    spec.validate();
    scheme->config.diffusion = spec;
  });
}

stochch_status stochch_cutoff(double R, double x, double* out) {
  if (auto st = require(out != nullptr, "out pointer is null")) return st;
  return guarded([&] { *out = sch::cutoff(R, x); });
}

/* -------------------------------------------------------------- dynamics */

stochch_status stochch_simulate(const stochch_scheme* scheme, const stochch_sheet* sheet,
                                stochch_trajectory** out) {
  if (auto st = require(scheme && sheet && out, "null pointer argument")) return st;
  return guarded([&] {
    *out = new stochch_trajectory{sch::simulate(scheme->config, sheet->sheet)};
  });
}

void stochch_trajectory_destroy(stochch_trajectory* trajectory) { delete trajectory; }

int stochch_trajectory_steps(const stochch_trajectory* trajectory) {
  return trajectory->trajectory.steps();
}

stochch_status stochch_trajectory_snapshot(const stochch_trajectory* trajectory, int i,
                                           double* out) {
  if (auto st = require(trajectory && out, "null pointer argument")) return st;
  if (auto st = require(i >= 0 && i <= trajectory->trajectory.steps(),
                        "snapshot index out of range"))
    return st;
  unwrap(trajectory->trajectory.snapshots[i], out);
  return STOCHCH_OK;
}

stochch_status stochch_trajectory_value_at(const stochch_trajectory* trajectory, int i,
                                           double x, double* out) {
  if (auto st = require(trajectory && out, "null pointer argument")) return st;
  if (auto st = require(i >= 0 && i <= trajectory->trajectory.steps(),
                        "snapshot index out of range"))
    return st;
  return guarded([&] { *out = trajectory->trajectory.value_at(i, x); });
}

stochch_status stochch_trajectory_newton_stats(const stochch_trajectory* trajectory,
                                               int step, int* iterations,
                                               double* residual) {
  if (auto st = require(trajectory && iterations && residual, "null pointer argument"))
    return st;
  if (auto st = require(step >= 0 && step < trajectory->trajectory.steps(),
                        "step index out of range"))
    return st;
  *iterations = trajectory->trajectory.step_stats[step].newton_iterations;
  *residual = trajectory->trajectory.step_stats[step].final_residual;
  return STOCHCH_OK;
}

/* --------------------------------------------------------------- kernels */

stochch_status stochch_kernel_value(stochch_kernel_family family, int truncation,
                                    int n, double tau, int order, double t, double x,
                                    double y, double* out) {
  if (auto st = require(out != nullptr, "out pointer is null")) return st;
  return guarded([&] {
    sch::KernelSpec spec = family == STOCHCH_KERNEL_EXACT
                               ? sch::KernelSpec::exact(truncation, order)
                               : family == STOCHCH_KERNEL_SEMI
                                     ? sch::KernelSpec::semi(n, order)
                                     : sch::KernelSpec::full(n, tau, order);
    *out = sch::kernel_value(spec, t, x, y);
  });
}

stochch_status stochch_kernel_error_space(int n, double T, double x, int order,
                                          double* out) {
  if (auto st = require(out != nullptr, "out pointer is null")) return st;
  return guarded([&] { *out = sch::kernel_error_space(n, T, x, order); });
}

stochch_status stochch_kernel_error_time(int n, double tau, double T, double x,
                                         int order, double* out) {
  if (auto st = require(out != nullptr, "out pointer is null")) return st;
  return guarded([&] { *out = sch::kernel_error_time(n, tau, T, x, order); });
}

/* ------------------------------------------------------------ experiment */

stochch_status stochch_run_experiment(const char* config_json,
                                      const stochch_run_options* options,
                                      char** summary) {
  if (auto st = require(config_json != nullptr, "config_json is null")) return st;
  sch::RunOptions opts;
  if (options != nullptr) {
    if (options->has_seed) opts.seed_override = options->seed;
    if (options->has_workers) opts.workers_override = options->workers;
    if (options->out_dir != nullptr) opts.out_override = options->out_dir;
  }
  bool properties_failed = false;
  stochch_status status = guarded([&] {
    const sch::RunOutcome outcome = sch::run_experiment(config_json, opts);
    properties_failed = outcome.properties_failed;
    if (summary != nullptr) {
      *summary = static_cast<char*>(std::malloc(outcome.summary.size() + 1));
      if (*summary == nullptr) throw std::bad_alloc();
      std::memcpy(*summary, outcome.summary.c_str(), outcome.summary.size() + 1);
    }
  });
  if (status == STOCHCH_OK && properties_failed) {
    set_error("one or more property suites reported violations");
    return STOCHCH_ERR_NO_CONVERGENCE;
  }
  return status;
}

void stochch_string_free(char* s) { std::free(s); }

}  // extern "C"
