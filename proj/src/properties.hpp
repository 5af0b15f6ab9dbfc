#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sch {

// One quantitative lemma checked over a batch of random or lattice probes.
// worst_margin is the most adverse slack seen (negative = violation).
struct PropertyResult {
  std::string name;
  long long samples = 0;
  long long violations = 0;
  double worst_margin = 0.0;

  bool pass() const { return violations == 0; }
};

// Exact spectral identities: eigenrelation, orthonormality, Parseval,
// transform round trip, the H^1 difference-quotient identity, and the
// c_{j,n} bounds. Tolerance 1e-12 relative.
std::vector<PropertyResult> run_spectral_suite(std::span<const int> ns);

// Discrete embedding/interpolation inequalities with explicit constants
// (sqrt(pi), 2, 4, and C0 = (int_0^inf e^{-32 z^4 / pi^4} dz)^{1/2}).
std::vector<PropertyResult> run_embedding_suite(std::span<const int> ns,
                                                int vectors_per_n, std::uint64_t seed);

// Semigroup and resolvent smoothing bounds with the closed-form constants
// sup_x x^g e^{-x^2/2} and sup_y y^g / (1 + y^2), on a (gamma, time) lattice.
std::vector<PropertyResult> run_smoothing_suite(int lattice_points, std::uint64_t seed);

// Structure of the double-well drift: one-sided bound, growth bound with
// c0 = 3, and the dissipativity inequality <x, A_n x^3> <= 0.
std::vector<PropertyResult> run_drift_suite(long long probes, std::uint64_t seed);

// Cut-off function shape: plateau, support, midpoint symmetry, bounds on
// K_R and K_R'.
std::vector<PropertyResult> run_cutoff_suite(int probes, std::uint64_t seed);

// Kolmogorov-Smirnov test of standardized sheet cells against N(0,1) at
// significance 0.01, plus the cell-variance check.
std::vector<PropertyResult> run_noise_suite(std::uint64_t seed);

// Everything above at the default (acceptance-level) sample counts.
std::vector<PropertyResult> run_all_properties(std::uint64_t seed);

// Numerically evaluated constant C0 of the l^inf smoothing bound.
double smoothing_constant_c0();

}  // namespace sch
