#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "density.hpp"
#include "rng.hpp"

using namespace sch;

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

DensityEstimate analytic_normal(const DensityEstimate& like) {
  DensityEstimate d = like;
  for (int i = 0; i < d.nodes(); ++i) {
    const double x = d.lo + i * d.spacing();
    d.values[i] = kInvSqrt2Pi * std::exp(-0.5 * x * x);
  }
  return d;
}

std::vector<double> normal_samples(int count, std::uint64_t seed, double shift = 0.0) {
  Rng rng(seed);
  std::vector<double> s(count);
  for (double& x : s) x = rng.normal() + shift;
  return s;
}

}  // namespace

TEST_CASE("kde normalization and degenerate input") {
  const std::vector<double> constant(200, 3.5);
  const DensityEstimate d = kde(constant);
  CHECK(d.integral() == doctest::Approx(1.0).epsilon(1e-3));
  // Peak sits at the sample value.
  int argmax = 0;
  for (int i = 0; i < d.nodes(); ++i)
    if (d.values[i] > d.values[argmax]) argmax = i;
  CHECK(d.lo + argmax * d.spacing() == doctest::Approx(3.5).epsilon(1e-6));
  for (double v : d.values) CHECK(v >= 0.0);

  CHECK_THROWS_AS(kde(std::vector<double>(30, 0.0)), std::invalid_argument);
}

TEST_CASE("kde consistency against the closed-form normal density") {
  const std::vector<double> samples = normal_samples(100000, 2020);
  const DensityEstimate d = kde(samples);
  CHECK(d.integral() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(l1_distance(d, analytic_normal(d)) <= 0.02);
}

TEST_CASE("kde risk is non-increasing in the sample count (majority check)") {
  int improvements = 0;
  const int reps = 20;
  for (int rep = 0; rep < reps; ++rep) {
    const std::vector<double> small = normal_samples(2000, 9000 + 2 * rep);
    const std::vector<double> large = normal_samples(4000, 9001 + 2 * rep);
    const DensityEstimate ds = kde(small), dl = kde(large);
    const double es = l1_distance(ds, analytic_normal(ds));
    const double el = l1_distance(dl, analytic_normal(dl));
    if (el <= es) ++improvements;
  }
  CHECK(improvements > reps / 2);
}

TEST_CASE("l1 distance properties") {
  const std::vector<double> a = normal_samples(2000, 77);
  const std::vector<double> b = normal_samples(2000, 78);
  const std::vector<double> far = normal_samples(2000, 79, 100.0);
  const DensityEstimate da = kde(a), db = kde(b), dfar = kde(far);

  CHECK(l1_distance(da, da) == 0.0);
  CHECK(l1_distance(da, db) == l1_distance(db, da));
  CHECK(l1_distance(da, dfar) == doctest::Approx(2.0).epsilon(2e-3));
  CHECK(l1_distance(da, db) >= 0.0);
  CHECK(l1_distance(da, db) <= 2.0 + 2e-3);

  // Triangle inequality with mesh slack.
  const std::vector<double> c = normal_samples(2000, 80, 0.5);
  const DensityEstimate dc = kde(c);
  CHECK(l1_distance(da, db) <= l1_distance(da, dc) + l1_distance(dc, db) + 1e-6);
}

TEST_CASE("density study: identical levels differ only by sampling noise") {
  SchemeConfig cfg;
  cfg.n = 8;
  cfg.m = 50;
  cfg.T = 0.05;
  const std::vector<int> levels{8, 8};
  // Uncoupled so the two draws are independent: pure KDE noise floor.
  const auto indep = density_study(cfg, levels, 8, 4000, 13, kPi / 2, 2, false);
  CHECK(indep.rows[0].l1_to_reference <= 0.05);
  CHECK(indep.rows[0].l1_to_reference > 0.0);
  CHECK(indep.rows[1].l1_to_reference <= 0.05);

  // Coupled, the identical level shares the sheet and collapses to zero.
  const auto coupled = density_study(cfg, levels, 8, 100, 13, kPi / 2, 2, true);
  CHECK(coupled.rows[0].l1_to_reference == 0.0);
}

TEST_CASE("density study: near-degenerate noise keeps every level close") {
  SchemeConfig cfg;
  cfg.n = 64;
  cfg.m = 50;
  cfg.T = 0.05;
  cfg.drift = DriftSpec::zero();
  cfg.diffusion = DiffusionSpec::constant(0.02);
  const std::vector<int> levels{16, 32};
  const auto result = density_study(cfg, levels, 64, 1000, 17, kPi / 2, 2);
  for (const auto& row : result.rows)
    CHECK(row.l1_to_reference <= 0.3);
  CHECK_FALSE(result.degenerate_sigma_warning);

  // sigma0 = 0 configs carry the no-density-guarantee warning.
  SchemeConfig zero_floor = cfg;
  zero_floor.diffusion = DiffusionSpec::zero();
  const auto warned = density_study(zero_floor, levels, 64, 100, 17, kPi / 2, 2);
  CHECK(warned.degenerate_sigma_warning);
}

TEST_CASE("density study validation") {
  SchemeConfig cfg;
  cfg.n = 8;
  cfg.m = 10;
  cfg.T = 0.01;
  const std::vector<int> levels{8};
  CHECK_THROWS_AS(density_study(cfg, levels, 4, 100, 1, kPi / 2, 1),
                  std::invalid_argument);  // reference coarser than level
  const std::vector<int> ok{4};
  CHECK_THROWS_AS(density_study(cfg, ok, 8, 10, 1, kPi / 2, 1),
                  std::invalid_argument);  // too few paths
  CHECK_THROWS_AS(density_study(cfg, ok, 8, 100, 1, 0.1, 1),
                  std::invalid_argument);  // probe off-grid
}

TEST_CASE("localization fidelity") {
  SchemeConfig cfg;
  cfg.n = 8;
  cfg.m = 100;
  cfg.T = 0.01;

  SUBCASE("huge radius: cutoff never activates") {
    const LocalizationReport rep = localization_fidelity(cfg, 1e6, 40, 21, 2);
    CHECK(rep.omega_fraction == 1.0);
    CHECK(rep.max_pathwise_gap <= 10.0 * cfg.solver.newton_tol);
  }

  SUBCASE("zero data: both runs are identically zero") {
    SchemeConfig zero_cfg = cfg;
    zero_cfg.u0 = [](double) { return 0.0; };
    zero_cfg.u0_label = "zero";
    zero_cfg.diffusion = DiffusionSpec::zero();
    const LocalizationReport rep = localization_fidelity(zero_cfg, 2.0, 10, 21, 1);
    CHECK(rep.omega_fraction == 1.0);
    CHECK(rep.max_pathwise_gap == 0.0);
  }

  SUBCASE("default coefficients at R = 2") {
    const LocalizationReport rep = localization_fidelity(cfg, 2.0, 50, 22, 2);
    CHECK(rep.omega_fraction == 1.0);  // sup |U| stays near 1 on this horizon
    CHECK(rep.max_pathwise_gap <= 1e-8);
  }

  CHECK_THROWS_AS(localization_fidelity(cfg, 0.5, 10, 1, 1), std::invalid_argument);
}
