#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <corrint/serialize.hpp>

namespace corrint::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdict = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCapacity = 3;

/// Malformed or invalid scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Verdict {
  std::string name;
  bool pass = false;
};

/// A numeric table written as CSV.
struct Series {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct ScenarioResult {
  std::string name;
  std::string operation;
  Json result;
  std::vector<Verdict> verdicts;
  std::vector<Series> series;
  /// One human readable line.
  std::string summary;
};

/// Parses JSON text; syntax errors become ConfigError naming line and column.
Json parse_config_text(std::string_view text);

/// Validates and runs one scenario. Throws ConfigError on invalid input and
/// lets CapacityError through.
ScenarioResult execute(const Json& config);

/// Final report document for a result.
Json report_json(const Json& config, const ScenarioResult& result);

/// Names of verdicts whose outcome differs from the scenario's expectation
/// (every verdict not listed under "expect" is expected to pass).
std::vector<std::string> failed_expectations(const Json& config, const ScenarioResult& result);

std::string series_csv(const Series& series);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  /// Write every series as CSV next to the report.
  bool emit_plot_data = true;
};

/// Executes a parsed config, writes `<name>.report.json` (and CSV series)
/// into out_dir, and returns the process exit code.
int run_config(const Json& config, const RunOptions& options, std::ostream& out, std::ostream& err);

/// Reads the file and forwards to run_config.
int run_scenario(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& out,
                 std::ostream& err);

}  // namespace corrint::cli
