#pragma once

// Campaign runner behind the entrocheck executable. Kept in a library so tests can drive
// it without spawning processes.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace entrocheck::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;

/// Settings as given on the command line or in a config file. Unset optionals fall back
/// to the config file, then to per-subcommand defaults.
struct CampaignConfig {
  std::string subcommand;
  std::optional<std::vector<int>> dims;
  std::optional<long> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> functional;
  std::optional<double> K;
  std::optional<std::string> correction;
  std::optional<int> m;
  std::optional<int> restarts;
  std::optional<int> max_iterations;
  std::optional<std::string> state_path;
  std::optional<std::string> input_path;
  std::optional<std::string> config_path;
  std::optional<std::string> out_csv;
  std::optional<std::string> out_json;
};

/// "2..8", "2,3,5" or "4". Throws std::invalid_argument.
std::vector<int> parse_dims(const std::string& text);

/// Merges the config file (if any) under the explicit settings. Throws on unreadable or
/// malformed files.
CampaignConfig apply_config_file(const CampaignConfig& flags);

/// Runs one subcommand; reports go to the configured paths, the summary to `out`.
int run(const CampaignConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (including the program name) and runs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace entrocheck::cli
