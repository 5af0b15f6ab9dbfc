#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "noise.hpp"
#include "properties.hpp"
#include "rng.hpp"

using namespace sch;

TEST_CASE("sampling determinism and preconditions") {
  const NoiseSheet a = NoiseSheet::sample(42, 8, 16, 0.5);
  const NoiseSheet b = NoiseSheet::sample(42, 8, 16, 0.5);
  for (int i = 0; i < a.m(); ++i)
    for (int k = 0; k < a.n(); ++k) CHECK(a.cell(i, k) == b.cell(i, k));

  const NoiseSheet c = NoiseSheet::sample(43, 8, 16, 0.5);
  bool any_diff = false;
  for (int i = 0; i < a.m(); ++i)
    for (int k = 0; k < a.n(); ++k) any_diff = any_diff || a.cell(i, k) != c.cell(i, k);
  CHECK(any_diff);

  CHECK_THROWS_AS(NoiseSheet::sample(1, 1, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseSheet::sample(1, 4, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseSheet::sample(1, 4, 4, 0.0), std::invalid_argument);
}

TEST_CASE("cell variance matches tau*h within 5%") {
  double sumsq = 0.0;
  long long count = 0;
  double variance = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const NoiseSheet sheet = NoiseSheet::sample(1000 + rep, 32, 64, 1.0);
    variance = sheet.cell_variance();
    for (int i = 0; i < sheet.m(); ++i)
      for (int k = 0; k < sheet.n(); ++k) {
        sumsq += sheet.cell(i, k) * sheet.cell(i, k);
        ++count;
      }
  }
  CHECK(sumsq / count == doctest::Approx(variance).epsilon(0.05));
}

TEST_CASE("beta increments: scaling and independence") {
  // Component variance = tau, since sqrt(n/pi) * sqrt(tau*pi/n) = sqrt(tau).
  const double T = 0.7;
  const int reps = 30000;
  double sumsq = 0.0;
  double cross = 0.0;
  double tau = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    const NoiseSheet sheet = NoiseSheet::sample(90000 + rep, 4, 1, T);
    tau = sheet.tau();
    const std::vector<double> beta = sheet.beta_increment(0);
    REQUIRE(beta.size() == 3);
    for (double x : beta) sumsq += x * x;
    cross += beta[0] * beta[1];
  }
  CHECK(sumsq / (3.0 * reps) == doctest::Approx(tau).epsilon(0.05));
  CHECK(std::abs(cross / reps) / tau < 0.02);  // empirical correlation

  const NoiseSheet sheet = NoiseSheet::sample(5, 4, 2, T);
  CHECK_THROWS_AS(sheet.beta_increment(2), std::invalid_argument);
  CHECK_THROWS_AS(sheet.beta_increment(-1), std::invalid_argument);
}

TEST_CASE("coarsening is an exact pair sum and commutes bitwise") {
  const NoiseSheet fine = NoiseSheet::sample(7, 16, 8, 0.25);

  const NoiseSheet cs = fine.coarsen_space();
  REQUIRE(cs.n() == 8);
  for (int i = 0; i < fine.m(); ++i)
    for (int k = 0; k < cs.n(); ++k)
      CHECK(cs.cell(i, k) == fine.cell(i, 2 * k) + fine.cell(i, 2 * k + 1));

  const NoiseSheet ct = fine.coarsen_time();
  REQUIRE(ct.m() == 4);
  for (int i = 0; i < ct.m(); ++i)
    for (int k = 0; k < fine.n(); ++k)
      CHECK(ct.cell(i, k) == fine.cell(2 * i, k) + fine.cell(2 * i + 1, k));

  // Total mass is preserved exactly (cells are lattice-quantized, so the
  // sums below are exact regardless of association order).
  long double total_fine = 0.0L, total_coarse = 0.0L;
  for (int i = 0; i < fine.m(); ++i)
    for (int k = 0; k < fine.n(); ++k) total_fine += fine.cell(i, k);
  for (int i = 0; i < cs.m(); ++i)
    for (int k = 0; k < cs.n(); ++k) total_coarse += cs.cell(i, k);
  CHECK(static_cast<double>(total_fine) == static_cast<double>(total_coarse));

  // space-then-time == time-then-space, bit for bit.
  const NoiseSheet st = fine.coarsen_space().coarsen_time();
  const NoiseSheet ts = fine.coarsen_time().coarsen_space();
  for (int i = 0; i < st.m(); ++i)
    for (int k = 0; k < st.n(); ++k) CHECK(st.cell(i, k) == ts.cell(i, k));

  CHECK_THROWS_AS(NoiseSheet::sample(1, 3, 4, 1.0).coarsen_space(), std::invalid_argument);
  CHECK_THROWS_AS(NoiseSheet::sample(1, 4, 3, 1.0).coarsen_time(), std::invalid_argument);
}

TEST_CASE("coarse cell variance doubles") {
  double fine_sq = 0.0, coarse_sq = 0.0;
  long long nf = 0, nc = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const NoiseSheet fine = NoiseSheet::sample(777 + rep, 32, 32, 1.0);
    const NoiseSheet coarse = fine.coarsen_space();
    for (int i = 0; i < fine.m(); ++i)
      for (int k = 0; k < fine.n(); ++k) {
        fine_sq += fine.cell(i, k) * fine.cell(i, k);
        ++nf;
      }
    for (int i = 0; i < coarse.m(); ++i)
      for (int k = 0; k < coarse.n(); ++k) {
        coarse_sq += coarse.cell(i, k) * coarse.cell(i, k);
        ++nc;
      }
  }
  CHECK(coarse_sq / nc == doctest::Approx(2.0 * fine_sq / nf).epsilon(0.05));
}

TEST_CASE("multi-level ladder is a deterministic function of the finest sheet") {
  const NoiseSheet finest = NoiseSheet::sample(99, 32, 16, 0.5);
  NoiseSheet level = finest;
  for (int drop = 0; drop < 3; ++drop) level = level.coarsen_space();
  NoiseSheet again = NoiseSheet::sample(99, 32, 16, 0.5);
  for (int drop = 0; drop < 3; ++drop) again = again.coarsen_space();
  for (int i = 0; i < level.m(); ++i)
    for (int k = 0; k < level.n(); ++k) CHECK(level.cell(i, k) == again.cell(i, k));
}

TEST_CASE("csv round trip") {
  const NoiseSheet sheet = NoiseSheet::sample(3, 4, 6, 0.125);
  std::stringstream buf;
  sheet.write_csv(buf);
  const NoiseSheet back = NoiseSheet::read_csv(buf);
  CHECK(back.n() == sheet.n());
  CHECK(back.m() == sheet.m());
  CHECK(back.T() == sheet.T());
  for (int i = 0; i < sheet.m(); ++i)
    for (int k = 0; k < sheet.n(); ++k) CHECK(back.cell(i, k) == sheet.cell(i, k));
}

TEST_CASE("standardized cells pass the KS normality screen") {
  for (const auto& r : run_noise_suite(2024)) {
    INFO(r.name);
    CHECK(r.violations == 0);
  }
}
