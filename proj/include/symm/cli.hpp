#ifndef SYMM_CLI_HPP
#define SYMM_CLI_HPP

// Scenario configs, the three subcommands, and the command-line front end.
// Exit codes: 0 every check passed, 1 some check failed, 2 usage or config error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "symm/geometry.hpp"
#include "symm/verify.hpp"

namespace symm::cli {

inline constexpr int kExitPassed = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;

/// Malformed or inconsistent scenario config; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ScenarioConfig {
  geometry::DomainSpec domain;
  std::vector<verify::CheckSpec> checks;
  verify::SourceSpec source;
  std::vector<int> levels;
  std::string output_dir = "symm_output";
  std::uint64_t seed = 20240917;
  bool equality = false;
  nlohmann::ordered_json domain_json; ///< echoed into every report
};

/// Strict parse: unknown keys, wrong types and missing required keys throw ConfigError.
/// Relative source file paths resolve against `base_dir`.
ScenarioConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
ScenarioConfig load_config(const std::filesystem::path& path);

/// "2..10", "2,3,5" or "4". Throws ConfigError on anything else or n outside [2, 10].
std::vector<int> parse_dimension_list(const std::string& text);

int cmd_constants(const std::vector<int>& dimensions, std::ostream& out);
/// Runs every check of the config at every level and writes one JSON report per
/// comparison, talenti_profile_<N>.csv per level, and summary.txt.
int cmd_verify(const std::filesystem::path& config_path, int jobs, std::ostream& out, std::ostream& err);
/// Writes talenti_profile_<N>.csv for every level of the config.
int cmd_profile(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

/// Output directory after the SYMM_OUTPUT_DIR override.
std::filesystem::path output_directory(const ScenarioConfig& config);

int run(int argc, char** argv);

} // namespace symm::cli

#endif
