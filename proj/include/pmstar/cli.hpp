#pragma once

// Command-line front end: axiom suites, demos, fixed-point and Fredholm
// runs, JSON reports with a stable digest.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pmstar/fredholm.hpp"

namespace pmstar::cli {

enum class ExitCode : int { Ok = 0, CheckFailed = 1, UsageError = 2 };

/// Malformed configuration or usage. The message names the offending field
/// path or input line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  /// check-axioms, pm-demo, fixed-point, fredholm or hadzic.
  std::string command;
  std::uint64_t seed = 42;
  std::size_t trials = 2000;
  /// JSON report destination; "-" means standard output.
  std::optional<std::string> json_path;

  // check-axioms
  std::string space = "trace";

  // fixed-point
  std::vector<double> alpha{1.0, 3.0};
  std::vector<double> lambda{0.5, 0.25};
  std::vector<double> start{0.0, 0.0};
  double lambda_stop = 1e-6;
  double metric_tol = 1e-10;
  std::size_t max_iter = 10000;

  // fredholm
  std::string problem_path;
  std::optional<fredholm::Problem> problem;
  std::string method = "both";
  double tol = 1e-10;

  // hadzic
  std::string tnorm = "min";
  std::vector<double> eps{0.5, 0.1, 0.01, 0.001};
  std::int64_t n_max = 10000;
};

/// Parses the problem schema
///   {"interval": [a, b], "m": int,
///    "kernels": {"K11": spec, "K12": spec, "K21": spec, "K22": spec},
///    "g": {"g1": spec, "g2": spec}}
/// with kernel specs constant/separable/table and source specs
/// constant/poly/table. Unknown fields are rejected. Throws ConfigError.
fredholm::Problem parse_fredholm_config(std::string_view text);

/// FNV-1a 64-bit hex digest of the report with "wall_time_ms" and
/// "digest" removed.
std::string report_digest(const nlohmann::json& report);

/// Runs one command. Writes a summary to `out` and the JSON report when
/// requested; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// argv parsing plus run(). Usage errors map to exit code 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pmstar::cli
