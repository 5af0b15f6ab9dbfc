#include "experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "density.hpp"
#include "dynamics.hpp"
#include "kernels.hpp"
#include "noise.hpp"
#include "parallel.hpp"
#include "properties.hpp"
#include "rate_study.hpp"

namespace sch {

namespace {

using nlohmann::json;

constexpr const char* kCommands[] = {"simulate",     "spatial-rate", "temporal-rate",
                                     "density",      "kernel-check", "properties",
                                     "moments",      "localization"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double get_number(const json& node, const std::string& path, const char* key,
                  std::optional<double> fallback = std::nullopt) {
  if (!node.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(path + "." + key, "missing required field");
  }
  if (!node[key].is_number()) throw ConfigError(path + "." + key, "must be a number");
  return node[key].get<double>();
}

int get_int(const json& node, const std::string& path, const char* key,
            std::optional<int> fallback = std::nullopt) {
  if (!node.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(path + "." + key, "missing required field");
  }
  if (!node[key].is_number_integer()) throw ConfigError(path + "." + key, "must be an integer");
  return node[key].get<int>();
}

std::vector<int> get_int_list(const json& node, const std::string& path, const char* key) {
  if (!node.contains(key) || !node[key].is_array() || node[key].empty())
    throw ConfigError(path + "." + key, "must be a non-empty array of integers");
  std::vector<int> out;
  for (const auto& v : node[key]) {
    if (!v.is_number_integer()) throw ConfigError(path + "." + key, "must contain integers");
    out.push_back(v.get<int>());
  }
  return out;
}

DriftSpec parse_drift(const json& node) {
  if (!node.contains("drift")) return DriftSpec::cubic();
  const json& d = node["drift"];
  const std::string type = d.value("type", "cubic");
  if (type == "cubic") return DriftSpec::cubic();
  if (type == "zero") return DriftSpec::zero();
  if (type == "cubic_localized") {
    const double R = get_number(d, "scheme.drift", "R");
    if (R < 1.0) throw ConfigError("scheme.drift.R", "cut-off radius must be >= 1");
    return DriftSpec::cubic_localized(R);
  }
  throw ConfigError("scheme.drift.type", "unknown drift '" + type +
                                             "' (expected cubic | cubic_localized | zero)");
}

DiffusionSpec parse_sigma(const json& node) {
  if (!node.contains("sigma")) return DiffusionSpec::default_experiment();
  const json& s = node["sigma"];
  const std::string type = s.value("type", "sinusoidal");
  if (type == "sinusoidal")
    return DiffusionSpec::sinusoidal(get_number(s, "scheme.sigma", "base", 0.5),
                                     get_number(s, "scheme.sigma", "amplitude", 0.25));
  if (type == "constant") return DiffusionSpec::constant(get_number(s, "scheme.sigma", "value"));
  if (type == "zero") return DiffusionSpec::zero();
  throw ConfigError("scheme.sigma.type", "unknown sigma '" + type +
                                             "' (expected sinusoidal | constant | zero)");
}

SchemeConfig parse_scheme(const json& root) {
  if (!root.contains("scheme")) throw ConfigError("scheme", "missing required section");
  const json& s = root["scheme"];
  SchemeConfig cfg;
  cfg.n = get_int(s, "scheme", "n");
  cfg.m = get_int(s, "scheme", "m");
  cfg.T = get_number(s, "scheme", "T");
  cfg.drift = parse_drift(s);
  cfg.diffusion = parse_sigma(s);
  const std::string u0 = s.value("u0", "sin");
  if (u0 == "sin") {
    cfg.u0 = [](double x) { return std::sin(x); };
  } else if (u0 == "zero") {
    cfg.u0 = [](double) { return 0.0; };
  } else {
    throw ConfigError("scheme.u0", "unknown initial value '" + u0 + "' (expected sin | zero)");
  }
  cfg.u0_label = u0;
  cfg.solver.newton_tol = get_number(s, "scheme", "newton_tol", 1e-10);
  cfg.solver.max_iters = get_int(s, "scheme", "max_iters", 50);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError("scheme", err.what());
  }
  return cfg;
}

std::vector<double> parse_probes(const json& study) {
  std::vector<double> probes{kPi / 2.0};
  if (study.contains("probe_points")) {
    if (!study["probe_points"].is_array() || study["probe_points"].empty())
      throw ConfigError("study.probe_points", "must be a non-empty array");
    probes.clear();
    for (const auto& v : study["probe_points"]) probes.push_back(v.get<double>());
  }
  return probes;
}

class RunDirectory {
 public:
  RunDirectory(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }
  const std::filesystem::path& path() const { return dir_; }

  std::ofstream open(const std::string& name) const {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + (dir_ / name).string());
    return out;
  }
  void write_json(const std::string& name, const json& j) const {
    auto out = open(name);
    out << j.dump(2) << '\n';
  }

 private:
  std::filesystem::path dir_;
};

json rate_report_json(const RateReport& report) {
  json levels = json::array();
  for (const auto& lr : report.levels)
    levels.push_back({{"level", lr.level},
                      {"scale", lr.scale},
                      {"error", lr.error},
                      {"stderr", lr.std_error}});
  return json{{"levels", levels},
              {"slope", report.slope},
              {"intercept", report.intercept},
              {"r_squared", report.r_squared},
              {"slope_ci", {report.slope_ci_lo, report.slope_ci_hi}},
              {"paths", report.paths},
              {"failed_paths", report.failed_paths},
              {"max_newton_residual", report.max_newton_residual},
              {"max_newton_iterations", report.max_newton_iterations}};
}

void write_rate_csv(const RunDirectory& dir, const RateReport& report) {
  auto out = dir.open("rate.csv");
  out << "level,scale,error,stderr\n";
  for (const auto& lr : report.levels)
    out << lr.level << ',' << fmt(lr.scale) << ',' << fmt(lr.error) << ','
        << fmt(lr.std_error) << '\n';
}

std::string run_rate_command(const json& root, StudyAxis axis, SchemeConfig scheme,
                             std::uint64_t seed, int workers, const RunDirectory& dir) {
  if (!root.contains("study")) throw ConfigError("study", "missing required section");
  const json& study = root["study"];
  StudyPlan plan;
  plan.axis = axis;
  plan.base = std::move(scheme);
  plan.levels = get_int_list(study, "study", "levels");
  plan.reference_level = get_int(study, "study", "reference");
  plan.paths = get_int(study, "study", "paths");
  plan.zeta = get_number(study, "study", "zeta", 1.0);
  plan.seed = seed;
  plan.probe_points = parse_probes(study);
  (axis == StudyAxis::spatial ? plan.base.n : plan.base.m) = plan.reference_level;
  try {
    plan.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError("study", err.what());
  }

  const RateReport report = run_study(plan, workers);
  write_rate_csv(dir, report);
  dir.write_json("rate.json", rate_report_json(report));

  std::ostringstream sum;
  sum << (axis == StudyAxis::spatial ? "spatial" : "temporal")
      << " strong-error study: slope " << fmt(report.slope) << " (95% CI ["
      << fmt(report.slope_ci_lo) << ", " << fmt(report.slope_ci_hi) << "]), r^2 "
      << fmt(report.r_squared) << "\n";
  for (const auto& lr : report.levels)
    sum << "  level " << lr.level << ": error " << fmt(lr.error) << " +- "
        << fmt(lr.std_error) << "\n";
  sum << "  paths " << report.paths << " (failed " << report.failed_paths
      << "), max Newton residual " << fmt(report.max_newton_residual) << "\n";
  return sum.str();
}

std::string run_simulate_command(const json& root, const SchemeConfig& scheme,
                                 std::uint64_t seed, const RunDirectory& dir) {
  std::vector<double> probes{kPi / 2.0};
  if (root.contains("study")) probes = parse_probes(root["study"]);
  const double probe = probes.front();

  const NoiseSheet sheet = NoiseSheet::sample(seed, scheme.n, scheme.m, scheme.T);
  const Trajectory traj = simulate(scheme, sheet);

  auto out = dir.open("trajectory.csv");
  out << "step,time,l2n_norm,linf_norm,value_at_probe,newton_iterations,newton_residual\n";
  for (int i = 0; i <= scheme.m; ++i) {
    const GridFunction& u = traj.snapshots[i];
    const int iters = i == 0 ? 0 : traj.step_stats[i - 1].newton_iterations;
    const double res = i == 0 ? 0.0 : traj.step_stats[i - 1].final_residual;
    out << i << ',' << fmt(i * scheme.tau()) << ',' << fmt(norm_lp(u, 2.0)) << ','
        << fmt(norm_lp(u, INFINITY)) << ',' << fmt(traj.value_at(i, probe)) << ','
        << iters << ',' << fmt(res) << '\n';
  }

  double worst_res = 0.0;
  int worst_iters = 0;
  for (const auto& s : traj.step_stats) {
    worst_res = std::max(worst_res, s.final_residual);
    worst_iters = std::max(worst_iters, s.newton_iterations);
  }
  std::ostringstream sum;
  sum << "simulated " << scheme.m << " steps on n=" << scheme.n << ", T=" << fmt(scheme.T)
      << "\n  final l2n norm " << fmt(norm_lp(traj.snapshots.back(), 2.0))
      << ", value at x=" << fmt(probe) << ": "
      << fmt(traj.value_at(scheme.m, probe)) << "\n  worst Newton residual "
      << fmt(worst_res) << ", worst iteration count " << worst_iters << "\n";
  return sum.str();
}

std::string run_density_command(const json& root, const SchemeConfig& scheme,
                                std::uint64_t seed, int workers, const RunDirectory& dir) {
  if (!root.contains("density")) throw ConfigError("density", "missing required section");
  const json& d = root["density"];
  const std::vector<int> levels = get_int_list(d, "density", "levels");
  const int reference = get_int(d, "density", "reference");
  const int paths = get_int(d, "density", "paths");
  const double probe_x = get_number(d, "density", "probe_x", kPi / 2.0);
  const std::string sampling = d.value("sampling", "coupled");
  if (sampling != "coupled" && sampling != "independent")
    throw ConfigError("density.sampling", "expected coupled | independent");

  DensityStudyResult result;
  try {
    result = density_study(scheme, levels, reference, paths, seed, probe_x, workers,
                           sampling == "coupled");
  } catch (const std::invalid_argument& err) {
    throw ConfigError("density", err.what());
  }

  auto out = dir.open("density.csv");
  out << "level,l1_to_reference,bandwidth,samples\n";
  for (const auto& row : result.rows)
    out << row.level << ',' << fmt(row.l1_to_reference) << ',' << fmt(row.bandwidth)
        << ',' << row.samples << '\n';
  for (std::size_t i = 0; i < result.estimates.size(); ++i) {
    const DensityEstimate& est = result.estimates[i];
    auto mesh = dir.open("density_level_" + std::to_string(result.rows[i].level) + ".csv");
    mesh << "x,density\n";
    for (int k = 0; k < est.nodes(); ++k)
      mesh << fmt(est.lo + k * est.spacing()) << ',' << fmt(est.values[k]) << '\n';
  }
  json levels_json = json::array();
  for (const auto& row : result.rows)
    levels_json.push_back({{"level", row.level},
                           {"l1_to_reference", row.l1_to_reference},
                           {"bandwidth", row.bandwidth},
                           {"samples", row.samples}});
  dir.write_json("density.json", {{"levels", levels_json},
                                  {"reference", result.reference_level},
                                  {"probe_x", probe_x},
                                  {"degenerate_sigma_warning", result.degenerate_sigma_warning}});

  std::ostringstream sum;
  sum << "density ladder at x=" << fmt(probe_x) << " (reference n=" << reference << ")\n";
  if (result.degenerate_sigma_warning)
    sum << "  warning: sigma0 = 0, density existence is not guaranteed\n";
  for (const auto& row : result.rows)
    if (row.level != reference)
      sum << "  n=" << row.level << ": L1 distance " << fmt(row.l1_to_reference) << "\n";
  return sum.str();
}

std::string run_kernel_command(const json& root, const RunDirectory& dir) {
  const json k = root.contains("kernel") ? root["kernel"] : json::object();
  std::vector<int> n_levels{4, 8, 16, 32};
  if (k.contains("n_levels")) n_levels = get_int_list(k, "kernel", "n_levels");
  const double T = get_number(k, "kernel", "T", 0.1);
  const double x = get_number(k, "kernel", "x", kPi / 2.0);
  const int time_n = get_int(k, "kernel", "time_n", 16);
  std::vector<double> taus;
  if (k.contains("time_taus")) {
    for (const auto& v : k["time_taus"]) taus.push_back(v.get<double>());
  } else {
    for (int div = 8; div <= 64; div *= 2) taus.push_back(T / div);
  }
  if (!(T > 0.0)) throw ConfigError("kernel.T", "must be > 0");

  json out_json;
  auto space_csv = dir.open("kernel_space.csv");
  space_csv << "order,n,value\n";
  std::ostringstream sum;
  sum << "kernel error integrals at x=" << fmt(x) << ", T=" << fmt(T) << "\n";
  for (int order = 0; order <= 1; ++order) {
    std::vector<std::pair<double, double>> pts;
    json values = json::array();
    for (int n : n_levels) {
      const double v = kernel_error_space(n, T, x, order);
      space_csv << order << ',' << n << ',' << fmt(v) << '\n';
      pts.emplace_back(n, v);
      values.push_back({{"n", n}, {"value", v}});
    }
    const LineFit fit = fit_rate(pts);
    out_json["space"][std::to_string(order)] = {{"slope", fit.slope},
                                                {"r_squared", fit.r_squared},
                                                {"values", values}};
    sum << "  space order " << order << ": slope in n = " << fmt(fit.slope) << "\n";
  }
  auto time_csv = dir.open("kernel_time.csv");
  time_csv << "order,tau,value\n";
  for (int order = 0; order <= 1; ++order) {
    std::vector<std::pair<double, double>> pts;
    json values = json::array();
    for (double tau : taus) {
      const double v = kernel_error_time(time_n, tau, T, x, order);
      time_csv << order << ',' << fmt(tau) << ',' << fmt(v) << '\n';
      pts.emplace_back(tau, v);
      values.push_back({{"tau", tau}, {"value", v}});
    }
    const LineFit fit = fit_rate(pts);
    out_json["time"][std::to_string(order)] = {{"slope", fit.slope},
                                               {"r_squared", fit.r_squared},
                                               {"values", values}};
    sum << "  time order " << order << " (n=" << time_n << "): slope in tau = "
        << fmt(fit.slope) << "\n";
  }
  dir.write_json("kernel.json", out_json);
  return sum.str();
}

std::string run_moments_command(const json& root, const SchemeConfig& scheme,
                                std::uint64_t seed, int workers, const RunDirectory& dir) {
  const json m = root.contains("moments") ? root["moments"] : json::object();
  std::vector<int> n_values{8, 16, 32, 64};
  if (m.contains("n_values")) n_values = get_int_list(m, "moments", "n_values");
  const int p = get_int(m, "moments", "p", 2);
  const int paths = get_int(m, "moments", "paths", 200);

  std::vector<SchemeConfig> configs;
  for (int n : n_values) {
    SchemeConfig cfg = scheme;
    cfg.n = n;
    configs.push_back(cfg);
  }
  std::vector<MomentRow> rows;
  try {
    rows = moment_sweep(configs, p, paths, seed, workers);
  } catch (const std::invalid_argument& err) {
    throw ConfigError("moments", err.what());
  }
  auto out = dir.open("moments.csv");
  out << "n,m,p,max_over_times,at_final_time,stderr\n";
  std::ostringstream sum;
  sum << "discrete H1 moment sweep, p=" << p << ", paths=" << paths << "\n";
  for (const auto& row : rows) {
    out << row.n << ',' << row.m << ',' << p << ',' << fmt(row.max_over_times) << ','
        << fmt(row.at_final_time) << ',' << fmt(row.final_std_error) << '\n';
    sum << "  n=" << row.n << ": max E||.||^p = " << fmt(row.max_over_times)
        << ", final " << fmt(row.at_final_time) << " +- " << fmt(row.final_std_error)
        << "\n";
  }
  return sum.str();
}

std::string run_localization_command(const json& root, const SchemeConfig& scheme,
                                     std::uint64_t seed, int workers,
                                     const RunDirectory& dir) {
  const json l = root.contains("localization") ? root["localization"] : json::object();
  const double R = get_number(l, "localization", "R", 2.0);
  const int paths = get_int(l, "localization", "paths", 500);
  LocalizationReport report;
  try {
    report = localization_fidelity(scheme, R, paths, seed, workers);
  } catch (const std::invalid_argument& err) {
    throw ConfigError("localization", err.what());
  }
  auto out = dir.open("localization.csv");
  out << "R,paths,omega_paths,omega_fraction,max_pathwise_gap\n";
  out << fmt(report.R) << ',' << report.paths << ',' << report.omega_paths << ','
      << fmt(report.omega_fraction) << ',' << fmt(report.max_pathwise_gap) << '\n';
  dir.write_json("localization.json", {{"R", report.R},
                                       {"paths", report.paths},
                                       {"omega_paths", report.omega_paths},
                                       {"omega_fraction", report.omega_fraction},
                                       {"max_pathwise_gap", report.max_pathwise_gap}});
  std::ostringstream sum;
  sum << "localization fidelity at R=" << fmt(R) << ": omega fraction "
      << fmt(report.omega_fraction) << ", max pathwise gap "
      << fmt(report.max_pathwise_gap) << "\n";
  return sum.str();
}

std::pair<std::string, bool> run_properties_command(std::uint64_t seed,
                                                    const RunDirectory& dir) {
  const std::vector<PropertyResult> results = run_all_properties(seed);
  auto out = dir.open("properties.csv");
  out << "name,samples,violations,worst_margin,pass\n";
  std::ostringstream sum;
  bool all_pass = true;
  for (const auto& r : results) {
    out << r.name << ',' << r.samples << ',' << r.violations << ',' << fmt(r.worst_margin)
        << ',' << (r.pass() ? "true" : "false") << '\n';
    sum << (r.pass() ? "PASS " : "FAIL ") << r.name << " (" << r.samples << " samples, "
        << r.violations << " violations)\n";
    all_pass = all_pass && r.pass();
  }
  return {sum.str(), !all_pass};
}

}  // namespace

const char* library_version() {
#ifdef STOCHCH_VERSION
  return STOCHCH_VERSION;
#else
  return "unknown";
#endif
}

SchemeConfig parse_scheme_fragment(const std::string& scheme_json) {
  json root;
  try {
    root["scheme"] = json::parse(scheme_json);
  } catch (const json::parse_error& err) {
    throw ConfigError("scheme", std::string("not valid JSON: ") + err.what());
  }
  return parse_scheme(root);
}

RunOutcome run_experiment(const std::string& config_json, const RunOptions& options) {
  json root;
  try {
    root = json::parse(config_json);
  } catch (const json::parse_error& err) {
    throw ConfigError("(root)", std::string("config is not valid JSON: ") + err.what());
  }
  if (!root.is_object()) throw ConfigError("(root)", "config must be a JSON object");
  if (!root.contains("command") || !root["command"].is_string())
    throw ConfigError("command", "missing required string field");
  const std::string command = root["command"].get<std::string>();
  bool known = false;
  for (const char* c : kCommands) known = known || command == c;
  if (!known)
    throw ConfigError("command", "unknown command '" + command + "'");

  std::uint64_t seed = 0;
  if (options.seed_override) {
    seed = *options.seed_override;
  } else if (root.contains("seed")) {
    if (!root["seed"].is_number_integer()) throw ConfigError("seed", "must be an integer");
    seed = root["seed"].get<std::uint64_t>();
  }
  int workers = 0;
  if (options.workers_override) {
    workers = *options.workers_override;
  } else if (root.contains("workers")) {
    workers = get_int(root, "(root)", "workers", 0);
  }
  if (workers < 0) throw ConfigError("workers", "must be >= 0");
  std::string output = root.value("output", "runs");
  if (options.out_override) output = *options.out_override;

  // Parse and validate everything needed before any computation starts.
  const bool needs_scheme = command != "kernel-check" && command != "properties";
  SchemeConfig scheme;
  if (needs_scheme) scheme = parse_scheme(root);

  const RunDirectory dir(std::filesystem::path(output) /
                         (command + "-seed" + std::to_string(seed)));

  std::string summary;
  bool properties_failed = false;
  if (command == "simulate") {
    summary = run_simulate_command(root, scheme, seed, dir);
  } else if (command == "spatial-rate") {
    summary = run_rate_command(root, StudyAxis::spatial, scheme, seed, workers, dir);
  } else if (command == "temporal-rate") {
    summary = run_rate_command(root, StudyAxis::temporal, scheme, seed, workers, dir);
  } else if (command == "density") {
    summary = run_density_command(root, scheme, seed, workers, dir);
  } else if (command == "kernel-check") {
    summary = run_kernel_command(root, dir);
  } else if (command == "moments") {
    summary = run_moments_command(root, scheme, seed, workers, dir);
  } else if (command == "localization") {
    summary = run_localization_command(root, scheme, seed, workers, dir);
  } else if (command == "properties") {
    std::tie(summary, properties_failed) = run_properties_command(seed, dir);
  }

  const auto now = std::chrono::system_clock::now();
  json manifest{{"command", command},
                {"seed", seed},
                {"workers", workers},
                {"output", output},
                {"version", library_version()},
                {"timestamp_unix", std::chrono::duration_cast<std::chrono::seconds>(
                                       now.time_since_epoch())
                                       .count()},
                {"config", root}};
  dir.write_json("manifest.json", manifest);
  {
    auto out = dir.open("summary.txt");
    out << summary;
  }

  RunOutcome outcome;
  outcome.summary = summary;
  outcome.directory = dir.path();
  outcome.properties_failed = properties_failed;
  return outcome;
}

}  // namespace sch
