/* stochch: finite difference toolkit for the stochastic Cahn-Hilliard
 * equation with multiplicative space-time white noise.
 *
 * C API over the C++ core: opaque handles, status codes, caller-owned
 * buffers. All functions returning stochch_status leave a thread-local
 * message retrievable via stochch_last_error() on failure. Vector buffers
 * hold the n-1 interior grid values unless stated otherwise.
 */
#ifndef STOCHCH_H
#define STOCHCH_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stochch_status {
  STOCHCH_OK = 0,
  STOCHCH_ERR_INVALID_ARGUMENT = 1, /* precondition / config violation */
  STOCHCH_ERR_NO_CONVERGENCE = 2,   /* Newton failed; tau too large */
  STOCHCH_ERR_IO = 3,
  STOCHCH_ERR_INTERNAL = 4
} stochch_status;

const char* stochch_version(void);
/* Message for the most recent failure on this thread; empty if none. */
const char* stochch_last_error(void);

/* ------------------------------------------------------------------ grid */

typedef struct stochch_grid stochch_grid;

stochch_status stochch_grid_create(int n, stochch_grid** out);
void stochch_grid_destroy(stochch_grid* grid);
int stochch_grid_size(const stochch_grid* grid);            /* n */
int stochch_grid_interior_count(const stochch_grid* grid);  /* n-1 */
double stochch_grid_mesh_width(const stochch_grid* grid);   /* pi/n */

/* Eigenpair j (1 <= j <= n-1) of the discrete Dirichlet Laplacian;
 * eigenvector may be NULL when only the eigenvalue is wanted. */
stochch_status stochch_grid_eigen_pair(const stochch_grid* grid, int j,
                                       double* eigenvalue, double* eigenvector);

/* Orthonormal sine transform; involutory (forward != 0 and == 0 agree). */
stochch_status stochch_grid_spectral_transform(const stochch_grid* grid,
                                               const double* in, double* out,
                                               int forward);
stochch_status stochch_grid_apply_laplacian(const stochch_grid* grid,
                                            const double* in, double* out);
stochch_status stochch_grid_apply_frac_power(const stochch_grid* grid, double gamma,
                                             const double* in, double* out);
stochch_status stochch_grid_apply_semigroup(const stochch_grid* grid, double t,
                                            const double* in, double* out);
stochch_status stochch_grid_apply_resolvent_power(const stochch_grid* grid, double tau,
                                                  int iota, const double* in,
                                                  double* out);
/* p >= 1; pass INFINITY (or HUGE_VAL) for the sup norm. */
stochch_status stochch_grid_norm_lp(const stochch_grid* grid, const double* in,
                                    double p, double* out);
stochch_status stochch_grid_norm_sobolev(const stochch_grid* grid, const double* in,
                                         double gamma, double* out);
stochch_status stochch_grid_interpolate(const stochch_grid* grid, const double* in,
                                        double x, double* out);
stochch_status stochch_grid_kappa(const stochch_grid* grid, double y, double* out);

/* ----------------------------------------------------------------- noise */

typedef struct stochch_sheet stochch_sheet;

stochch_status stochch_sheet_sample(uint64_t seed, int n, int m, double T,
                                    stochch_sheet** out);
void stochch_sheet_destroy(stochch_sheet* sheet);
int stochch_sheet_space_cells(const stochch_sheet* sheet); /* n */
int stochch_sheet_time_steps(const stochch_sheet* sheet);  /* m */
double stochch_sheet_horizon(const stochch_sheet* sheet);  /* T */
stochch_status stochch_sheet_cell(const stochch_sheet* sheet, int i, int k,
                                  double* out);
/* out has n-1 entries: sqrt(n/pi) * cell(i, k), k = 1..n-1. */
stochch_status stochch_sheet_beta_increment(const stochch_sheet* sheet, int i,
                                            double* out);
stochch_status stochch_sheet_coarsen_space(const stochch_sheet* sheet,
                                           stochch_sheet** out);
stochch_status stochch_sheet_coarsen_time(const stochch_sheet* sheet,
                                          stochch_sheet** out);
stochch_status stochch_sheet_write_csv(const stochch_sheet* sheet, const char* path);
stochch_status stochch_sheet_read_csv(const char* path, stochch_sheet** out);

/* ---------------------------------------------------------------- scheme */

typedef struct stochch_scheme stochch_scheme;
typedef double (*stochch_scalar_fn)(double x, void* ctx);

/* JSON fragment with the same keys as the config file's "scheme" section,
 * e.g. {"n":16,"m":100,"T":0.1,"u0":"sin","drift":{"type":"cubic"},
 *       "sigma":{"type":"sinusoidal","base":0.5,"amplitude":0.25}}. */
stochch_status stochch_scheme_create_json(const char* json, stochch_scheme** out);
void stochch_scheme_destroy(stochch_scheme* scheme);

/* Replace the drift by a caller-supplied Lipschitz f with derivative. */
stochch_status stochch_scheme_set_custom_drift(stochch_scheme* scheme,
                                               stochch_scalar_fn f,
                                               stochch_scalar_fn fprime, void* ctx);
/* Replace sigma; sup/lipschitz/sigma0 are the declared coefficient bounds. */
stochch_status stochch_scheme_set_custom_diffusion(stochch_scheme* scheme,
                                                   stochch_scalar_fn sigma,
                                                   stochch_scalar_fn sigma_prime,
                                                   void* ctx, double sup_bound,
                                                   double lipschitz, double sigma0);

/* K_R cut-off (R >= 1). */
stochch_status stochch_cutoff(double R, double x, double* out);

/* ------------------------------------------------------------- dynamics */

typedef struct stochch_trajectory stochch_trajectory;

/* Runs the fully discrete scheme over the sheet (dimensions must match). */
stochch_status stochch_simulate(const stochch_scheme* scheme,
                                const stochch_sheet* sheet,
                                stochch_trajectory** out);
void stochch_trajectory_destroy(stochch_trajectory* trajectory);
int stochch_trajectory_steps(const stochch_trajectory* trajectory);
stochch_status stochch_trajectory_snapshot(const stochch_trajectory* trajectory,
                                           int i, double* out);
stochch_status stochch_trajectory_value_at(const stochch_trajectory* trajectory,
                                           int i, double x, double* out);
stochch_status stochch_trajectory_newton_stats(const stochch_trajectory* trajectory,
                                               int step, int* iterations,
                                               double* residual);

/* -------------------------------------------------------------- kernels */

typedef enum stochch_kernel_family {
  STOCHCH_KERNEL_EXACT = 0,
  STOCHCH_KERNEL_SEMI = 1,
  STOCHCH_KERNEL_FULL = 2
} stochch_kernel_family;

/* truncation: exact family only; n/tau: discrete families. order 0 is the
 * kernel itself, order 1 its (discrete) Laplacian in y. */
stochch_status stochch_kernel_value(stochch_kernel_family family, int truncation,
                                    int n, double tau, int order, double t, double x,
                                    double y, double* out);
stochch_status stochch_kernel_error_space(int n, double T, double x, int order,
                                          double* out);
stochch_status stochch_kernel_error_time(int n, double tau, double T, double x,
                                         int order, double* out);

/* ------------------------------------------------------------ experiment */

typedef struct stochch_run_options {
  int has_seed; /* nonzero: use seed below instead of the config's */
  uint64_t seed;
  int has_workers;
  int workers;
  const char* out_dir; /* NULL: use the config's "output" */
} stochch_run_options;

/* Runs a full experiment config (JSON text, schema documented in the
 * repository README) and writes manifest/result files. On success *summary
 * receives a malloc'd human-readable summary; free with stochch_string_free.
 * options may be NULL. Returns STOCHCH_ERR_INVALID_ARGUMENT for config
 * problems and STOCHCH_ERR_NO_CONVERGENCE for numerical failures; the
 * `properties` command reports violated properties as no-convergence. */
stochch_status stochch_run_experiment(const char* config_json,
                                      const stochch_run_options* options,
                                      char** summary);
void stochch_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* STOCHCH_H */
