// Exercises the shared-library surface through the public C header only.

#include <math.h>
#include <stdint.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "stochch.h"

static int g_failures = 0;

#define CHECK(cond)                                                       \
  do {                                                                    \
    if (!(cond)) {                                                        \
      fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond);     \
      ++g_failures;                                                       \
    }                                                                     \
  } while (0)

#define CHECK_OK(expr) CHECK((expr) == STOCHCH_OK)

static void test_grid(void) {
  stochch_grid* grid = NULL;
  CHECK(stochch_grid_create(1, &grid) == STOCHCH_ERR_INVALID_ARGUMENT);
  CHECK(strlen(stochch_last_error()) > 0);

  CHECK_OK(stochch_grid_create(4, &grid));
  CHECK(stochch_grid_size(grid) == 4);
  CHECK(stochch_grid_interior_count(grid) == 3);
  CHECK(fabs(stochch_grid_mesh_width(grid) - M_PI / 4) < 1e-15);

  double lambda = 0.0, e1[3];
  CHECK_OK(stochch_grid_eigen_pair(grid, 1, &lambda, e1));
  CHECK(fabs(lambda - (-0.9496412035517837)) < 1e-13);
  CHECK(fabs(e1[0] - 0.5) < 1e-14);
  CHECK(stochch_grid_eigen_pair(grid, 9, &lambda, NULL) == STOCHCH_ERR_INVALID_ARGUMENT);

  // Round trip through the transform.
  double v[3] = {0.25, -1.5, 2.0}, coeffs[3], back[3];
  CHECK_OK(stochch_grid_spectral_transform(grid, v, coeffs, 1));
  CHECK_OK(stochch_grid_spectral_transform(grid, coeffs, back, 0));
  for (int k = 0; k < 3; ++k) CHECK(fabs(back[k] - v[k]) < 1e-12);

  // Semigroup/resolvent on an eigenvector.
  double out[3];
  CHECK_OK(stochch_grid_apply_semigroup(grid, 1.0, e1, out));
  CHECK(fabs(out[1] - exp(-lambda * lambda) * e1[1]) < 1e-13);
  CHECK_OK(stochch_grid_apply_resolvent_power(grid, 0.1, 1, e1, out));
  CHECK(fabs(out[1] - e1[1] / (1.0 + 0.1 * lambda * lambda)) < 1e-13);
  CHECK(stochch_grid_apply_semigroup(grid, -1.0, e1, out) ==
        STOCHCH_ERR_INVALID_ARGUMENT);

  double ones[3] = {1.0, 1.0, 1.0}, norm = 0.0;
  CHECK_OK(stochch_grid_norm_lp(grid, ones, 2.0, &norm));
  CHECK(fabs(norm - sqrt(3.0 * M_PI / 4.0)) < 1e-13);
  CHECK_OK(stochch_grid_norm_lp(grid, ones, INFINITY, &norm));
  CHECK(norm == 1.0);

  double at = 0.0;
  CHECK_OK(stochch_grid_interpolate(grid, v, 1.5 * M_PI / 4.0, &at));
  CHECK(fabs(at - 0.5 * (v[0] + v[1])) < 1e-13);
  CHECK_OK(stochch_grid_kappa(grid, 2.3 * M_PI / 4.0, &at));
  CHECK(fabs(at - 2.0 * M_PI / 4.0) < 1e-14);

  stochch_grid_destroy(grid);
}

static void test_sheet(void) {
  stochch_sheet* sheet = NULL;
  CHECK(stochch_sheet_sample(1, 4, 4, 0.0, &sheet) == STOCHCH_ERR_INVALID_ARGUMENT);
  CHECK_OK(stochch_sheet_sample(11, 8, 4, 0.5, &sheet));
  CHECK(stochch_sheet_space_cells(sheet) == 8);
  CHECK(stochch_sheet_time_steps(sheet) == 4);
  CHECK(stochch_sheet_horizon(sheet) == 0.5);

  stochch_sheet* coarse = NULL;
  CHECK_OK(stochch_sheet_coarsen_space(sheet, &coarse));
  double fine0, fine1, sum;
  CHECK_OK(stochch_sheet_cell(sheet, 0, 0, &fine0));
  CHECK_OK(stochch_sheet_cell(sheet, 0, 1, &fine1));
  CHECK_OK(stochch_sheet_cell(coarse, 0, 0, &sum));
  CHECK(sum == fine0 + fine1);

  double beta[7];
  CHECK_OK(stochch_sheet_beta_increment(sheet, 0, beta));
  double cell;
  CHECK_OK(stochch_sheet_cell(sheet, 0, 1, &cell));
  CHECK(fabs(beta[0] - sqrt(8.0 / M_PI) * cell) < 1e-15);
  CHECK(stochch_sheet_beta_increment(sheet, 9, beta) == STOCHCH_ERR_INVALID_ARGUMENT);

  // CSV round trip through a temp file.
  const char* path = "capi_sheet_roundtrip.csv";
  CHECK_OK(stochch_sheet_write_csv(sheet, path));
  stochch_sheet* back = NULL;
  CHECK_OK(stochch_sheet_read_csv(path, &back));
  double a, b;
  CHECK_OK(stochch_sheet_cell(sheet, 3, 7, &a));
  CHECK_OK(stochch_sheet_cell(back, 3, 7, &b));
  CHECK(a == b);
  remove(path);

  stochch_sheet_destroy(back);
  stochch_sheet_destroy(coarse);
  stochch_sheet_destroy(sheet);
}

static double double_well_drift(double x, void* ctx) {
  (void)ctx;
  return x * x * x - x;
}
static double double_well_drift_prime(double x, void* ctx) {
  (void)ctx;
  return 3.0 * x * x - 1.0;
}

static void test_scheme_and_simulation(void) {
  stochch_scheme* scheme = NULL;
  CHECK(stochch_scheme_create_json("{\"n\": 1}", &scheme) ==
        STOCHCH_ERR_INVALID_ARGUMENT);
  CHECK_OK(stochch_scheme_create_json(
      "{\"n\": 8, \"m\": 20, \"T\": 0.01}", &scheme));

  stochch_sheet* sheet = NULL;
  CHECK_OK(stochch_sheet_sample(7, 8, 20, 0.01, &sheet));

  stochch_trajectory* traj = NULL;
  CHECK_OK(stochch_simulate(scheme, sheet, &traj));
  CHECK(stochch_trajectory_steps(traj) == 20);

  double snapshot[7];
  CHECK_OK(stochch_trajectory_snapshot(traj, 20, snapshot));
  double at = 0.0;
  CHECK_OK(stochch_trajectory_value_at(traj, 20, M_PI / 2, &at));
  CHECK(fabs(at - snapshot[3]) < 1e-15);

  int iters = 0;
  double residual = 1.0;
  CHECK_OK(stochch_trajectory_newton_stats(traj, 0, &iters, &residual));
  CHECK(iters >= 1);
  CHECK(residual <= 1e-10);

  // The default drift is the double-well cubic; wiring the same function in
  // through the custom hook must reproduce the trajectory exactly.
  stochch_scheme* custom = NULL;
  CHECK_OK(stochch_scheme_create_json("{\"n\": 8, \"m\": 20, \"T\": 0.01}", &custom));
  CHECK_OK(stochch_scheme_set_custom_drift(custom, double_well_drift,
                                           double_well_drift_prime, NULL));
  stochch_trajectory* traj2 = NULL;
  CHECK_OK(stochch_simulate(custom, sheet, &traj2));
  double snapshot2[7];
  CHECK_OK(stochch_trajectory_snapshot(traj2, 20, snapshot2));
  for (int k = 0; k < 7; ++k) CHECK(snapshot[k] == snapshot2[k]);

  double kr = -1.0;
  CHECK_OK(stochch_cutoff(2.0, 2.5, &kr));
  CHECK(fabs(kr - 0.5) < 1e-14);
  CHECK(stochch_cutoff(0.5, 0.0, &kr) == STOCHCH_ERR_INVALID_ARGUMENT);

  stochch_trajectory_destroy(traj2);
  stochch_trajectory_destroy(traj);
  stochch_scheme_destroy(custom);
  stochch_scheme_destroy(scheme);
  stochch_sheet_destroy(sheet);
}

static void test_kernels(void) {
  double v = 0.0;
  CHECK_OK(stochch_kernel_value(STOCHCH_KERNEL_EXACT, 50, 0, 0.0, 0, 1.0, M_PI / 2,
                                M_PI / 2, &v));
  CHECK(fabs(v - 0.23419932609727667) < 1e-12);
  CHECK(stochch_kernel_value(STOCHCH_KERNEL_EXACT, 50, 0, 0.0, 0, 0.0, 1.0, 1.0, &v) ==
        STOCHCH_ERR_INVALID_ARGUMENT);

  double e4 = 0.0, e8 = 0.0;
  CHECK_OK(stochch_kernel_error_space(4, 0.01, M_PI / 2, 0, &e4));
  CHECK_OK(stochch_kernel_error_space(8, 0.01, M_PI / 2, 0, &e8));
  CHECK(e4 > e8);

  double t1 = 0.0;
  CHECK_OK(stochch_kernel_error_time(4, 0.005, 0.01, M_PI / 2, 0, &t1));
  CHECK(t1 > 0.0);
}

static void test_run_experiment(void) {
  char* summary = NULL;
  stochch_run_options options;
  memset(&options, 0, sizeof options);
  options.out_dir = "capi_runs";

  CHECK(stochch_run_experiment("{\"command\": \"simulate\", \"scheme\": {\"n\": 1}}",
                               &options, &summary) == STOCHCH_ERR_INVALID_ARGUMENT);

  const char* cfg =
      "{\"command\": \"simulate\", \"seed\": 4,"
      " \"scheme\": {\"n\": 8, \"m\": 10, \"T\": 0.01}}";
  CHECK_OK(stochch_run_experiment(cfg, &options, &summary));
  CHECK(summary != NULL && strlen(summary) > 0);
  stochch_string_free(summary);
}

int main(void) {
  CHECK(strlen(stochch_version()) > 0);
  test_grid();
  test_sheet();
  test_scheme_and_simulation();
  test_kernels();
  test_run_experiment();
  if (g_failures == 0) {
    printf("capi_tests: all checks passed\n");
    return 0;
  }
  fprintf(stderr, "capi_tests: %d failures\n", g_failures);
  return 1;
}
