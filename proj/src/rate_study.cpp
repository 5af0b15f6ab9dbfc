#include "rate_study.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <string>

#include "parallel.hpp"
#include "rng.hpp"
#include "summation.hpp"

namespace sch {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int probe_index(const Grid& grid, double x) {
  const double t = x / grid.h;
  const int k = static_cast<int>(std::llround(t));
  if (std::abs(t - k) > 1e-9 || k < 1 || k > grid.interior_count())
    throw std::invalid_argument("probe point is not an interior grid point");
  return k - 1;
}

}  // namespace

void StudyPlan::validate() const {
  base.validate();
  if (levels.empty()) throw std::invalid_argument("study.levels must be non-empty");
  if (paths < 1) throw std::invalid_argument("study.paths must be >= 1");
  if (zeta < 1.0 || zeta > 2.0)
    throw std::invalid_argument("study.zeta must lie in [1, 2]");
  int prev = 0;
  for (int level : levels) {
    if (!is_power_of_two(level))
      throw std::invalid_argument("study.levels must be powers of two");
    if (level <= prev) throw std::invalid_argument("study.levels must be strictly increasing");
    prev = level;
  }
  // Equality with the finest level is allowed: it turns that level into the
  // identical-coupled-run sanity case with exact error zero.
  if (!is_power_of_two(reference_level) || reference_level < levels.back())
    throw std::invalid_argument(
        "study.reference must be a power of two at least as fine as every level");
  if (probe_points.empty()) throw std::invalid_argument("study.probe_points must be non-empty");
  for (double x : probe_points) {
    for (int level : levels) probe_index(Grid::make(axis == StudyAxis::spatial ? level : base.n), x);
    probe_index(Grid::make(axis == StudyAxis::spatial ? reference_level : base.n), x);
  }
  if (axis == StudyAxis::spatial) {
    // Keep the (untracked) temporal error negligible against the coarsest
    // spatial level: tau^{3/8} <= n_coarsest^{-1} / 5.
    const double tau = base.T / base.m;
    if (std::pow(tau, 0.375) > 0.2 / levels.front())
      throw std::invalid_argument(
          "study.m too coarse: tau^(3/8) must be <= 1/(5 n_coarsest) for spatial studies");
  }
}

LineFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2)
    throw std::invalid_argument("rate fit needs at least two points");
  std::vector<double> lx(points.size()), ly(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
      throw std::invalid_argument("rate fit needs positive scales and errors");
    lx[i] = std::log(points[i].first);
    ly[i] = std::log(points[i].second);
  }
  const double mx = pairwise_mean(lx), my = pairwise_mean(ly);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("rate fit needs distinct scales");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

RateReport run_study(const StudyPlan& plan, int workers) {
  plan.validate();
  const int levels = static_cast<int>(plan.levels.size());
  const int probes = static_cast<int>(plan.probe_points.size());
  const bool spatial = plan.axis == StudyAxis::spatial;

  // |u_level - u_ref|^zeta per (path, level, probe); slot layout keeps the
  // reduction independent of worker scheduling.
  std::vector<double> diffs(static_cast<std::size_t>(plan.paths) * levels * probes, 0.0);
  std::vector<char> path_failed(plan.paths, 0);
  std::atomic<long long> residual_bits{0};
  std::atomic<int> max_iters{0};

  const auto note_stats = [&](const Trajectory& traj) {
    double res = 0.0;
    int it = 0;
    for (const StepStats& s : traj.step_stats) {
      res = std::max(res, s.final_residual);
      it = std::max(it, s.newton_iterations);
    }
    // max via atomic compare on the raw bit pattern (values are >= 0).
    long long bits = std::bit_cast<long long>(res);
    long long seen = residual_bits.load();
    while (bits > seen && !residual_bits.compare_exchange_weak(seen, bits)) {}
    int is = max_iters.load();
    while (it > is && !max_iters.compare_exchange_weak(is, it)) {}
  };

  parallel_for(plan.paths, workers, [&](int path) {
    const std::uint64_t path_seed = derive_seed(plan.seed, static_cast<std::uint64_t>(path));
    try {
      NoiseSheet sheet = spatial
          ? NoiseSheet::sample(path_seed, plan.reference_level, plan.base.m, plan.base.T)
          : NoiseSheet::sample(path_seed, plan.base.n, plan.reference_level, plan.base.T);

      SchemeConfig ref_cfg = plan.base;
      (spatial ? ref_cfg.n : ref_cfg.m) = plan.reference_level;
      const Trajectory ref = simulate(ref_cfg, sheet);
      note_stats(ref);
      std::vector<double> ref_values(probes);
      for (int p = 0; p < probes; ++p)
        ref_values[p] = ref.snapshots.back()[probe_index(ref.grid, plan.probe_points[p])];

      // Walk the ladder from fine to coarse, coarsening the sheet in place.
      NoiseSheet current = std::move(sheet);
      for (int li = levels - 1; li >= 0; --li) {
        const int level = plan.levels[li];
        while ((spatial ? current.n() : current.m()) > level)
          current = spatial ? current.coarsen_space() : current.coarsen_time();
        SchemeConfig cfg = plan.base;
        (spatial ? cfg.n : cfg.m) = level;
        const Trajectory traj = simulate(cfg, current);
        note_stats(traj);
        for (int p = 0; p < probes; ++p) {
          const double v = traj.snapshots.back()[probe_index(traj.grid, plan.probe_points[p])];
          diffs[(static_cast<std::size_t>(path) * levels + li) * probes + p] =
              std::pow(std::abs(v - ref_values[p]), plan.zeta);
        }
      }
    } catch (const NonconvergenceError&) {
      path_failed[path] = 1;
    }
  });

  RateReport report;
  report.paths = plan.paths;
  report.failed_paths = static_cast<int>(std::count(path_failed.begin(), path_failed.end(), 1));
  if (report.failed_paths * 100 > plan.paths)
    throw StudyError("more than 1% of paths hit Newton nonconvergence (" +
                     std::to_string(report.failed_paths) + "/" + std::to_string(plan.paths) +
                     "); refine tau");
  report.max_newton_residual = std::bit_cast<double>(residual_bits.load());
  report.max_newton_iterations = max_iters.load();

  std::vector<int> good;
  for (int p = 0; p < plan.paths; ++p)
    if (!path_failed[p]) good.push_back(p);
  if (good.empty()) throw StudyError("every path failed");

  // e_l = max over probes of (mean over paths |diff|^zeta)^(1/zeta).
  const auto level_error = [&](std::span<const int> paths_in, int li) {
    double worst = 0.0;
    std::vector<double> vals(paths_in.size());
    for (int p = 0; p < probes; ++p) {
      for (std::size_t i = 0; i < paths_in.size(); ++i)
        vals[i] = diffs[(static_cast<std::size_t>(paths_in[i]) * levels + li) * probes + p];
      worst = std::max(worst, std::pow(pairwise_mean(vals), 1.0 / plan.zeta));
    }
    return worst;
  };

  std::vector<std::pair<double, double>> points;
  for (int li = 0; li < levels; ++li) {
    LevelResult lr;
    lr.level = plan.levels[li];
    lr.scale = spatial ? kPi / plan.levels[li] : plan.base.T / plan.levels[li];
    lr.error = level_error(good, li);
    report.levels.push_back(lr);
    points.emplace_back(lr.scale, lr.error);
  }

  bool fit_ok = points.size() >= 2;
  for (auto& [sc, e] : points)
    if (!(e > 0.0)) fit_ok = false;
  if (fit_ok) {
    const LineFit fit = fit_rate(points);
    report.slope = fit.slope;
    report.intercept = fit.intercept;
    report.r_squared = fit.r_squared;
  }

  // Paired bootstrap over paths: resample once per replicate, recompute all
  // level errors and the slope.
  constexpr int kResamples = 1000;
  Rng boot(derive_seed(plan.seed, 0x626f6f74ULL));
  std::vector<std::vector<double>> level_samples(levels);
  std::vector<double> slopes;
  std::vector<int> resample(good.size());
  for (int r = 0; r < kResamples; ++r) {
    for (auto& idx : resample)
      idx = good[static_cast<std::size_t>(boot.next_u64() % good.size())];
    std::vector<std::pair<double, double>> pts;
    bool positive = levels >= 2;
    for (int li = 0; li < levels; ++li) {
      const double e = level_error(resample, li);
      level_samples[li].push_back(e);
      if (!(e > 0.0)) positive = false;
      pts.emplace_back(report.levels[li].scale, e);
    }
    if (positive) slopes.push_back(fit_rate(pts).slope);
  }
  for (int li = 0; li < levels; ++li) {
    const auto& s = level_samples[li];
    const double mean = pairwise_mean(s);
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    report.levels[li].std_error = s.size() > 1 ? std::sqrt(var / (s.size() - 1)) : 0.0;
  }
  if (!slopes.empty()) {
    std::sort(slopes.begin(), slopes.end());
    const auto pct = [&](double q) {
      const double pos = q * (slopes.size() - 1);
      const std::size_t lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, slopes.size() - 1);
      return slopes[lo] + (pos - lo) * (slopes[hi] - slopes[lo]);
    };
    report.slope_ci_lo = pct(0.025);
    report.slope_ci_hi = pct(0.975);
  }
  return report;
}

std::vector<MomentRow> moment_sweep(std::span<const SchemeConfig> configs, int p,
                                    int paths, std::uint64_t seed, int workers) {
  if (p != 2 && p != 4) throw std::invalid_argument("moment exponent p must be 2 or 4");
  if (paths < 1) throw std::invalid_argument("moment sweep needs paths >= 1");
  if (!configs.empty()) {
    const double T = configs.front().T;
    for (const auto& cfg : configs)
      if (std::abs(cfg.T - T) > 1e-12)
        throw std::invalid_argument("moment sweep configs must share T");
  }

  std::vector<MomentRow> rows;
  for (const SchemeConfig& cfg : configs) {
    cfg.validate();
    const int snapshots = cfg.m + 1;
    std::vector<double> norms(static_cast<std::size_t>(paths) * snapshots, 0.0);
    std::vector<double> residuals(paths, 0.0);
    parallel_for(paths, workers, [&](int path) {
      const NoiseSheet sheet =
          NoiseSheet::sample(derive_seed(seed, static_cast<std::uint64_t>(path)), cfg.n,
                             cfg.m, cfg.T);
      const Trajectory traj = simulate(cfg, sheet);
      residuals[path] = traj.worst_residual();
      for (int i = 0; i < snapshots; ++i)
        norms[static_cast<std::size_t>(path) * snapshots + i] =
            std::pow(norm_sobolev(traj.snapshots[i], 0.5), p);
    });

    MomentRow row;
    row.n = cfg.n;
    row.m = cfg.m;
    for (double r : residuals) row.max_newton_residual = std::max(row.max_newton_residual, r);
    std::vector<double> per_path(paths);
    for (int i = 0; i < snapshots; ++i) {
      for (int path = 0; path < paths; ++path)
        per_path[path] = norms[static_cast<std::size_t>(path) * snapshots + i];
      const double mean = pairwise_mean(per_path);
      row.max_over_times = std::max(row.max_over_times, mean);
      if (i == snapshots - 1) {
        row.at_final_time = mean;
        // Bootstrap standard error of the final-time mean.
        Rng boot(derive_seed(seed, 0x6d6f6dULL));
        constexpr int kResamples = 1000;
        std::vector<double> means;
        means.reserve(kResamples);
        std::vector<double> sample(paths);
        for (int r = 0; r < kResamples; ++r) {
          for (int s = 0; s < paths; ++s)
            sample[s] = per_path[boot.next_u64() % paths];
          means.push_back(pairwise_mean(sample));
        }
        const double mm = pairwise_mean(means);
        double var = 0.0;
        for (double v : means) var += (v - mm) * (v - mm);
        row.final_std_error = std::sqrt(var / (means.size() - 1));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sch
