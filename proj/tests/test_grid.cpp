#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "grid.hpp"
#include "properties.hpp"
#include "rng.hpp"

using namespace sch;

namespace {

GridFunction random_vector(const Grid& grid, Rng& rng) {
  std::vector<double> v(grid.interior_count());
  for (double& x : v) x = rng.normal();
  return GridFunction(grid, std::move(v));
}

}  // namespace

TEST_CASE("make_grid basics") {
  const Grid g2 = Grid::make(2);
  CHECK(g2.h == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(g2.interior_count() == 1);
  const Grid g4 = Grid::make(4);
  CHECK(g4.h == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(g4.interior_count() == 3);
  CHECK_THROWS_AS(Grid::make(1), std::invalid_argument);
}

TEST_CASE("eigen pairs from the closed form") {
  // n=2: lambda_{1,2} = -8/pi^2, from sin^2(pi/4) = 1/2.
  const Grid g2 = Grid::make(2);
  CHECK(eigenvalue(g2, 1) == doctest::Approx(-8.0 / (kPi * kPi)).epsilon(1e-14));

  const Grid g4 = Grid::make(4);
  const auto [lambda, e1] = eigen_pair(g4, 1);
  CHECK(lambda == doctest::Approx(-0.9496412035517837).epsilon(1e-13));
  CHECK(e1[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(e1[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(e1[2] == doctest::Approx(0.5).epsilon(1e-14));

  CHECK_THROWS_AS(eigen_pair(g4, 0), std::invalid_argument);
  CHECK_THROWS_AS(eigen_pair(g4, 4), std::invalid_argument);

  // Fixed j, growing n: lambda_{j,n} -> -j^2.
  double prev_gap = 10.0;
  for (int n = 8; n <= 512; n *= 4) {
    const double gap = std::abs(eigenvalue(Grid::make(n), 3) + 9.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-3);
}

TEST_CASE("spectral transform expansions") {
  const Grid g8 = Grid::make(8);
  // v = e_3 -> unit coefficient in slot 3.
  const SpectralCoeffs c = spectral_forward(eigenvector(g8, 3));
  for (int j = 1; j <= 7; ++j)
    CHECK(c.a[j - 1] == doctest::Approx(j == 3 ? 1.0 : 0.0).epsilon(1e-13));

  // Linearity: e_1 + 2 e_2 on n=4 -> coefficients (1, 2, 0).
  const Grid g4 = Grid::make(4);
  GridFunction v = eigenvector(g4, 1);
  const GridFunction e2 = eigenvector(g4, 2);
  for (int k = 0; k < v.size(); ++k) v[k] += 2.0 * e2[k];
  const SpectralCoeffs c2 = spectral_forward(v);
  CHECK(c2.a[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(c2.a[1] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(c2.a[2] == doctest::Approx(0.0).epsilon(1e-13));

  // Round trip on random data, including the degenerate n=2 grid.
  Rng rng(7);
  for (int n : {2, 16}) {
    const Grid grid = Grid::make(n);
    const GridFunction w = random_vector(grid, rng);
    const GridFunction back = spectral_inverse(spectral_forward(w));
    for (int k = 0; k < w.size(); ++k)
      CHECK(back[k] == doctest::Approx(w[k]).epsilon(1e-12));
  }
}

TEST_CASE("laplacian stencil agrees with the spectral route") {
  const Grid g4 = Grid::make(4);
  const auto [lambda, e1] = eigen_pair(g4, 1);
  const GridFunction Ae = apply_laplacian(e1);
  for (int k = 0; k < 3; ++k)
    CHECK(Ae[k] == doctest::Approx(lambda * e1[k]).epsilon(1e-13));

  CHECK(norm_lp(apply_laplacian(GridFunction::zero(g4)), INFINITY) == 0.0);

  Rng rng(11);
  const Grid g16 = Grid::make(16);
  const GridFunction v = random_vector(g16, rng);
  SpectralCoeffs c = spectral_forward(v);
  for (int j = 1; j <= 15; ++j) c.a[j - 1] *= eigenvalue(g16, j);
  const GridFunction spectral = spectral_inverse(c);
  const GridFunction stencil = apply_laplacian(v);
  for (int k = 0; k < v.size(); ++k)
    CHECK(stencil[k] == doctest::Approx(spectral[k]).epsilon(1e-12));
}

TEST_CASE("fractional powers, semigroup, resolvent") {
  const Grid g4 = Grid::make(4);
  const auto [lambda, e1] = eigen_pair(g4, 1);
  Rng rng(13);

  SUBCASE("gamma = 0 is the identity") {
    const Grid g16 = Grid::make(16);
    const GridFunction v = random_vector(g16, rng);
    const GridFunction w = apply_frac_power(v, 0.0);
    for (int k = 0; k < v.size(); ++k) CHECK(w[k] == v[k]);
  }
  SUBCASE("gamma = 1 on e_1 equals -A e_1") {
    const GridFunction w = apply_frac_power(e1, 1.0);
    const GridFunction Ae = apply_laplacian(e1);
    for (int k = 0; k < 3; ++k) {
      CHECK(w[k] == doctest::Approx(-lambda * e1[k]).epsilon(1e-13));
      CHECK(w[k] == doctest::Approx(-Ae[k]).epsilon(1e-13));
    }
  }
  SUBCASE("half power applied twice is the full power") {
    const Grid g16 = Grid::make(16);
    const GridFunction v = random_vector(g16, rng);
    const GridFunction once = apply_frac_power(v, 1.0);
    const GridFunction twice = apply_frac_power(apply_frac_power(v, 0.5), 0.5);
    for (int k = 0; k < v.size(); ++k)
      CHECK(twice[k] == doctest::Approx(once[k]).epsilon(1e-12));
  }
  SUBCASE("semigroup on e_1 and contraction") {
    const GridFunction w = apply_semigroup(e1, 1.0);
    const double factor = std::exp(-lambda * lambda);
    CHECK(factor == doctest::Approx(0.4058310189577474).epsilon(1e-12));
    for (int k = 0; k < 3; ++k)
      CHECK(w[k] == doctest::Approx(factor * e1[k]).epsilon(1e-13));
    CHECK_THROWS_AS(apply_semigroup(e1, -0.1), std::invalid_argument);

    const Grid g16 = Grid::make(16);
    const GridFunction v = random_vector(g16, rng);
    const GridFunction s = apply_semigroup(v, 0.5);
    CHECK(norm_lp(s, 2.0) <= norm_lp(v, 2.0) * (1 + 1e-13));
    const GridFunction id = apply_semigroup(v, 0.0);
    for (int k = 0; k < v.size(); ++k) CHECK(id[k] == v[k]);
  }
  SUBCASE("resolvent power") {
    const GridFunction w = apply_resolvent_power(e1, 0.1, 1);
    const double factor = 1.0 / (1.0 + 0.1 * lambda * lambda);
    CHECK(factor == doctest::Approx(0.9172781657964074).epsilon(1e-12));
    for (int k = 0; k < 3; ++k)
      CHECK(w[k] == doctest::Approx(factor * e1[k]).epsilon(1e-13));
    CHECK_THROWS_AS(apply_resolvent_power(e1, 0.0, 1), std::invalid_argument);

    const Grid g16 = Grid::make(16);
    const GridFunction v = random_vector(g16, rng);
    const GridFunction twice = apply_resolvent_power(apply_resolvent_power(v, 0.3, 1), 0.3, 1);
    const GridFunction squared = apply_resolvent_power(v, 0.3, 2);
    for (int k = 0; k < v.size(); ++k)
      CHECK(twice[k] == doctest::Approx(squared[k]).epsilon(1e-12));
  }
}

TEST_CASE("discrete norms") {
  const Grid g4 = Grid::make(4);
  const GridFunction ones(g4, {1.0, 1.0, 1.0});
  CHECK(norm_lp(ones, 2.0) == doctest::Approx(std::sqrt(3.0 * kPi / 4.0)).epsilon(1e-14));
  CHECK(norm_lp(ones, INFINITY) == 1.0);
  CHECK(norm_lp(GridFunction::zero(g4), 1.0) == 0.0);
  CHECK(norm_lp(GridFunction::zero(g4), INFINITY) == 0.0);
  CHECK_THROWS_AS(norm_lp(ones, 0.5), std::invalid_argument);

  // gamma = 0 reduces to the l2 norm.
  Rng rng(17);
  const Grid g16 = Grid::make(16);
  const GridFunction v = random_vector(g16, rng);
  CHECK(norm_sobolev(v, 0.0) == doctest::Approx(norm_lp(v, 2.0)).epsilon(1e-13));

  // e_1 on n=4: sqrt(pi/4) * sqrt(-lambda_{1,4}).
  const GridFunction e1 = eigenvector(g4, 1);
  CHECK(norm_sobolev(e1, 0.5) == doctest::Approx(0.8636240253467439).epsilon(1e-13));

  // Difference-quotient identity for the H1 seminorm.
  double quot = 0.0;
  for (int k = 0; k <= 15; ++k) {
    const double left = k > 0 ? v[k - 1] : 0.0;
    const double right = k < 15 ? v[k] : 0.0;
    quot += (right - left) * (right - left);
  }
  CHECK(norm_sobolev(v, 0.5) ==
        doctest::Approx(std::sqrt(quot * 16.0 / kPi)).epsilon(1e-12));
}

TEST_CASE("polygonal interpolation and kappa") {
  const Grid g4 = Grid::make(4);
  const GridFunction v(g4, {1.0, -2.0, 0.5});
  for (int k = 1; k <= 3; ++k) CHECK(interpolate_linear(v, k * g4.h) == v[k - 1]);
  CHECK(interpolate_linear(v, 0.0) == 0.0);
  CHECK(interpolate_linear(v, kPi) == 0.0);
  CHECK(interpolate_linear(v, 1.5 * g4.h) ==
        doctest::Approx(0.5 * (v[0] + v[1])).epsilon(1e-13));
  CHECK(interpolate_linear(v, 0.5 * g4.h) == doctest::Approx(0.5 * v[0]).epsilon(1e-13));
  CHECK_THROWS_AS(interpolate_linear(v, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(interpolate_linear(v, kPi + 0.1), std::invalid_argument);

  CHECK(kappa(g4, 0.0) == 0.0);
  CHECK(kappa(g4, 0.9 * g4.h) == 0.0);
  CHECK(kappa(g4, 2.3 * g4.h) == doctest::Approx(2.0 * g4.h).epsilon(1e-14));
  CHECK_THROWS_AS(kappa(g4, -1.0), std::invalid_argument);
}

TEST_CASE("spectral identity suite stays clean on dyadic grids") {
  std::vector<int> ns{2, 4, 8, 32};
  for (const auto& r : run_spectral_suite(ns)) {
    INFO(r.name);
    CHECK(r.violations == 0);
  }
}

TEST_CASE("embedding inequalities with explicit constants") {
  const int ns[] = {4, 16, 64};
  for (const auto& r : run_embedding_suite(ns, 500, 99)) {
    INFO(r.name);
    CHECK(r.violations == 0);
  }
  // C0 has the closed form Gamma(5/4) (32/pi^4)^(-1/4), cross-check.
  const double a = 32.0 / std::pow(kPi, 4.0);
  const double closed = std::sqrt(std::tgamma(1.25) * std::pow(a, -0.25));
  CHECK(smoothing_constant_c0() == doctest::Approx(closed).epsilon(1e-8));
}

TEST_CASE("smoothing bound suites") {
  for (const auto& r : run_smoothing_suite(400, 5)) {
    INFO(r.name);
    CHECK(r.violations == 0);
  }
}
