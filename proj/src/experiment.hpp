#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "dynamics.hpp"

namespace sch {

// Configuration problem with the offending field path; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field_, const std::string& message)
      : std::runtime_error(field_ + ": " + message), field(std::move(field_)) {}
  std::string field;
};

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  std::optional<int> workers_override;
};

struct RunOutcome {
  std::string summary;
  std::filesystem::path directory;
  bool properties_failed = false;  // `properties` command with violations
};

// Parses the JSON experiment config, validates every field against the
// module preconditions, runs the requested command, and writes the manifest,
// result files, and summary under <output>/<command>-seed<seed>/.
//
// Throws ConfigError for parse/validation problems, NonconvergenceError or
// StudyError for numerical failures, std::runtime_error for I/O.
RunOutcome run_experiment(const std::string& config_json, const RunOptions& options);

// Parses a JSON fragment shaped like the config file's "scheme" section.
// Throws ConfigError with the offending field path.
SchemeConfig parse_scheme_fragment(const std::string& scheme_json);

const char* library_version();

}  // namespace sch
