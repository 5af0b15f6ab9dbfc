#include "density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "rng.hpp"
#include "summation.hpp"

namespace sch {

namespace {

constexpr int kKdeNodes = 2048;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double trapezoid(std::span<const double> values, double spacing) {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * spacing;
}

double interp_estimate(const DensityEstimate& d, double x) {
  if (x <= d.lo || x >= d.hi) return 0.0;
  const double t = (x - d.lo) / d.spacing();
  const int i = std::min(static_cast<int>(t), d.nodes() - 2);
  const double theta = t - i;
  return (1.0 - theta) * d.values[i] + theta * d.values[i + 1];
}

}  // namespace

double DensityEstimate::integral() const { return trapezoid(values, spacing()); }

DensityEstimate kde(std::span<const double> samples, double bandwidth) {
  const int count = static_cast<int>(samples.size());
  if (count < 50) throw std::invalid_argument("kde needs at least 50 samples");

  double lo_sample = samples[0], hi_sample = samples[0];
  for (double s : samples) {
    lo_sample = std::min(lo_sample, s);
    hi_sample = std::max(hi_sample, s);
    if (!std::isfinite(s)) throw std::invalid_argument("kde samples must be finite");
  }
  if (bandwidth <= 0.0) {
    const double mean = pairwise_mean(samples);
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    const double sd = std::sqrt(var / (count - 1));
    bandwidth = 1.06 * sd * std::pow(static_cast<double>(count), -0.2);
    if (!(bandwidth > 0.0))  // degenerate sample; keep the peak resolvable
      bandwidth = 1e-6 * std::max(1.0, std::abs(samples[0]));
  }

  DensityEstimate d;
  d.bandwidth = bandwidth;
  d.sample_count = count;
  d.lo = lo_sample - 4.0 * bandwidth;
  d.hi = hi_sample + 4.0 * bandwidth;
  d.values.assign(kKdeNodes, 0.0);
  const double spacing = (d.hi - d.lo) / (kKdeNodes - 1);
  const double weight = 1.0 / (count * bandwidth);
  // Each sample touches only nodes within 8 bandwidths; beyond that the
  // Gaussian is below 1e-14 of its peak.
  const double reach = 8.0 * bandwidth;
  for (double s : samples) {
    const int first = std::max(0, static_cast<int>(std::ceil((s - reach - d.lo) / spacing)));
    const int last = std::min(kKdeNodes - 1, static_cast<int>(std::floor((s + reach - d.lo) / spacing)));
    for (int i = first; i <= last; ++i) {
      const double z = (d.lo + i * spacing - s) / bandwidth;
      d.values[i] += weight * kInvSqrt2Pi * std::exp(-0.5 * z * z);
    }
  }
  return d;
}

double l1_distance(const DensityEstimate& a, const DensityEstimate& b) {
  const double lo = std::min(a.lo, b.lo);
  const double hi = std::max(a.hi, b.hi);
  const int nodes = 2 * kKdeNodes;
  const double spacing = (hi - lo) / (nodes - 1);
  std::vector<double> diff(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double x = lo + i * spacing;
    diff[i] = std::abs(interp_estimate(a, x) - interp_estimate(b, x));
  }
  return trapezoid(diff, spacing);
}

DensityStudyResult density_study(const SchemeConfig& base, std::span<const int> levels,
                                 int reference_level, int paths, std::uint64_t seed,
                                 double probe_x, int workers, bool coupled) {
  base.validate();
  if (paths < 50) throw std::invalid_argument("density study needs paths >= 50");
  // Equality is allowed: an identical level measures the pure KDE sampling
  // noise floor against an independent reference draw.
  for (int level : levels)
    if (level > reference_level)
      throw std::invalid_argument("density study reference must be at least as fine as every level");

  DensityStudyResult result;
  result.reference_level = reference_level;
  result.degenerate_sigma_warning = !(base.diffusion.sigma0 > 0.0);

  std::vector<int> all_levels(levels.begin(), levels.end());
  all_levels.push_back(reference_level);

  std::vector<int> probe_slot(all_levels.size());
  for (std::size_t li = 0; li < all_levels.size(); ++li) {
    const Grid grid = Grid::make(all_levels[li]);
    const double t = probe_x / grid.h;
    const int k = static_cast<int>(std::llround(t));
    if (std::abs(t - k) > 1e-9 || k < 1 || k > grid.interior_count())
      throw std::invalid_argument("density probe point must be a grid point of every level");
    probe_slot[li] = k - 1;
  }

  const std::size_t level_count = all_levels.size();
  std::vector<double> samples(level_count * paths);
  std::vector<double> path_residuals(paths, 0.0);
  if (coupled) {
    parallel_for(paths, workers, [&](int path) {
      const NoiseSheet finest =
          NoiseSheet::sample(derive_seed(seed, static_cast<std::uint64_t>(path)),
                             reference_level, base.m, base.T);
      for (std::size_t li = 0; li < level_count; ++li) {
        NoiseSheet sheet = finest;
        while (sheet.n() > all_levels[li]) sheet = sheet.coarsen_space();
        SchemeConfig cfg = base;
        cfg.n = all_levels[li];
        const Trajectory traj = simulate(cfg, sheet);
        samples[li * paths + path] = traj.snapshots.back()[probe_slot[li]];
        path_residuals[path] = std::max(path_residuals[path], traj.worst_residual());
      }
    });
  } else {
    for (std::size_t li = 0; li < level_count; ++li) {
      SchemeConfig cfg = base;
      cfg.n = all_levels[li];
      parallel_for(paths, workers, [&](int path) {
        const std::uint64_t s = derive_seed(
            seed, (static_cast<std::uint64_t>(li) << 32) ^ static_cast<std::uint64_t>(path));
        const NoiseSheet sheet = NoiseSheet::sample(s, cfg.n, cfg.m, cfg.T);
        const Trajectory traj = simulate(cfg, sheet);
        samples[li * paths + path] = traj.snapshots.back()[probe_slot[li]];
        path_residuals[path] = std::max(path_residuals[path], traj.worst_residual());
      });
    }
  }
  for (double r : path_residuals)
    result.max_newton_residual = std::max(result.max_newton_residual, r);

  std::vector<DensityEstimate> estimates;
  for (std::size_t li = 0; li < level_count; ++li)
    estimates.push_back(
        kde(std::span<const double>(samples).subspan(li * paths, paths)));

  const DensityEstimate& reference = estimates.back();
  for (std::size_t li = 0; li < all_levels.size(); ++li) {
    DensityStudyRow row;
    row.level = all_levels[li];
    row.bandwidth = estimates[li].bandwidth;
    row.samples = estimates[li].sample_count;
    row.l1_to_reference = li + 1 == all_levels.size() ? 0.0
                                                      : l1_distance(estimates[li], reference);
    result.rows.push_back(row);
  }
  result.estimates = std::move(estimates);
  return result;
}

LocalizationReport localization_fidelity(const SchemeConfig& base, double R, int paths,
                                         std::uint64_t seed, int workers) {
  base.validate();
  if (R < 1.0) throw std::invalid_argument("localization radius R must be >= 1");
  if (paths < 1) throw std::invalid_argument("localization study needs paths >= 1");

  std::vector<char> in_omega(paths, 0);
  std::vector<double> gaps(paths, 0.0);
  std::vector<double> residuals(paths, 0.0);
  parallel_for(paths, workers, [&](int path) {
    const NoiseSheet sheet =
        NoiseSheet::sample(derive_seed(seed, static_cast<std::uint64_t>(path)), base.n,
                           base.m, base.T);
    SchemeConfig cubic_cfg = base;
    cubic_cfg.drift = DriftSpec::cubic();
    SchemeConfig local_cfg = base;
    local_cfg.drift = DriftSpec::cubic_localized(R);
    const Trajectory cubic = simulate(cubic_cfg, sheet);
    const Trajectory local = simulate(local_cfg, sheet);
    residuals[path] = std::max(cubic.worst_residual(), local.worst_residual());

    double sup = 0.0, gap = 0.0;
    for (std::size_t i = 0; i < cubic.snapshots.size(); ++i) {
      for (int k = 0; k < cubic.snapshots[i].size(); ++k) {
        sup = std::max(sup, std::abs(cubic.snapshots[i][k]));
        gap = std::max(gap, std::abs(cubic.snapshots[i][k] - local.snapshots[i][k]));
      }
    }
    in_omega[path] = sup <= R ? 1 : 0;
    gaps[path] = gap;
  });

  LocalizationReport report;
  report.R = R;
  report.paths = paths;
  for (int p = 0; p < paths; ++p) {
    report.max_newton_residual = std::max(report.max_newton_residual, residuals[p]);
    if (in_omega[p]) {
      ++report.omega_paths;
      report.max_pathwise_gap = std::max(report.max_pathwise_gap, gaps[p]);
    }
  }
  report.omega_fraction = static_cast<double>(report.omega_paths) / paths;
  return report;
}

}  // namespace sch
