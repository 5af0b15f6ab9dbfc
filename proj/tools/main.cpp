// Command line front end. All functionality lives behind the C API in
// libstochch; this binary only reads the config file, forwards overrides,
// and maps status codes to exit codes (0 ok, 2 config error, 3 numerical
// failure, 1 anything else).

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "stochch.h"

int main(int argc, char** argv) {
  CLI::App app{"stochastic Cahn-Hilliard finite difference experiment runner"};
  app.set_version_flag("--version", std::string(stochch_version()));

  std::string config_path;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out_dir;
  app.add_option("--config", config_path, "experiment config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  auto* workers_opt =
      app.add_option("--workers", workers, "cap path-level parallelism (0 = all cores)");
  auto* out_opt = app.add_option("--out", out_dir, "override the output directory");

  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "error: cannot read config file %s\n", config_path.c_str());
    return 2;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string config = buffer.str();

  stochch_run_options options{};
  options.has_seed = seed_opt->count() > 0 ? 1 : 0;
  options.seed = seed;
  options.has_workers = workers_opt->count() > 0 ? 1 : 0;
  options.workers = workers;
  options.out_dir = out_opt->count() > 0 ? out_dir.c_str() : nullptr;

  char* summary = nullptr;
  const stochch_status status = stochch_run_experiment(config.c_str(), &options, &summary);
  if (summary != nullptr) {
    std::fputs(summary, stdout);
    stochch_string_free(summary);
  }
  switch (status) {
    case STOCHCH_OK:
      return 0;
    case STOCHCH_ERR_INVALID_ARGUMENT:
      std::fprintf(stderr, "config error: %s\n", stochch_last_error());
      return 2;
    case STOCHCH_ERR_NO_CONVERGENCE:
      std::fprintf(stderr, "numerical failure: %s\n", stochch_last_error());
      return 3;
    default:
      std::fprintf(stderr, "error: %s\n", stochch_last_error());
      return 1;
  }
}
