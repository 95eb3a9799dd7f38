#ifndef PTRLAB_EXPERIMENTS_HPP
#define PTRLAB_EXPERIMENTS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ptrlab {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the experiment runner: 0 ok, 2 configuration error,
/// 3 numerical failure.
enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3 };

struct RunOutcome {
  int exit_code = kOk;
  std::string message;                // diagnostic on failure
  std::string manifest_path;
  std::vector<std::string> outputs;   // files declared in the manifest
};

/// Runs the experiment described by a JSON config file.  Every output file is
/// declared in the manifest; a rerun with identical config + seed produces
/// byte-identical result artifacts (the manifest additionally records wall
/// time, its only volatile field).  The PTRLAB_OUTPUT_DIR environment
/// variable overrides the configured output directory.
RunOutcome run_experiment(const std::string& config_path);

/// Parses and validates only; returns kOk or kConfigError with a message.
RunOutcome validate_config(const std::string& config_path);

/// Prints the bundled medium catalog (name, c bounds, recommended T).
void print_presets(std::ostream& out);

}  // namespace ptrlab

#endif  // PTRLAB_EXPERIMENTS_HPP
