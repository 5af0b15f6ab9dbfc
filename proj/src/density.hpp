#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dynamics.hpp"

namespace sch {

// Gaussian kernel density estimate on a uniform 1-D mesh. Normalized so the
// trapezoid integral over the mesh is 1 up to the 1e-3 tolerance the mesh
// truncation allows.
struct DensityEstimate {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> values;  // at mesh nodes lo + i * spacing
  double bandwidth = 0.0;
  int sample_count = 0;

  int nodes() const { return static_cast<int>(values.size()); }
  double spacing() const { return (hi - lo) / (nodes() - 1); }
  double integral() const;  // trapezoid
};

// bandwidth <= 0 selects Silverman's rule 1.06 * sigma_hat * M^{-1/5}.
// Requires at least 50 samples.
DensityEstimate kde(std::span<const double> samples, double bandwidth = 0.0);

// L^1 distance of the two estimates after re-meshing onto their union
// interval (linear interpolation, zero extension). The total-variation
// surrogate: lies in [0, 2] up to mesh tolerance.
double l1_distance(const DensityEstimate& a, const DensityEstimate& b);

struct DensityStudyRow {
  int level = 0;           // n
  double l1_to_reference = 0.0;
  double bandwidth = 0.0;
  int samples = 0;
};

struct DensityStudyResult {
  std::vector<DensityStudyRow> rows;  // coarse-to-fine ladder, reference last
  std::vector<DensityEstimate> estimates;
  int reference_level = 0;
  bool degenerate_sigma_warning = false;
  double max_newton_residual = 0.0;
};

// Distribution of u^{n,tau}(T, probe_x) per spatial level, estimated from
// `paths` i.i.d. samples per level; distances are taken to the
// reference-level estimate. With `coupled` set, path p draws one finest
// sheet and every level coarsens it (common random numbers): the marginal
// law of each level's samples is unchanged, but the level-versus-reference
// comparison noise drops by the cross-level correlation. `coupled = false`
// samples every level independently.
DensityStudyResult density_study(const SchemeConfig& base, std::span<const int> levels,
                                 int reference_level, int paths, std::uint64_t seed,
                                 double probe_x, int workers = 0, bool coupled = true);

struct LocalizationReport {
  double R = 0.0;
  double omega_fraction = 0.0;   // fraction of paths with sup |U^i_k| <= R
  double max_pathwise_gap = 0.0; // over omega paths and steps, in l^inf_n
  int paths = 0;
  int omega_paths = 0;
  double max_newton_residual = 0.0;
};

// Runs the cubic and the localized drift on identical sheets and measures
// the pathwise agreement on the localization event.
LocalizationReport localization_fidelity(const SchemeConfig& base, double R, int paths,
                                         std::uint64_t seed, int workers = 0);

}  // namespace sch
