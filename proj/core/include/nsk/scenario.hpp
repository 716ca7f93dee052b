#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nsk/config.hpp"

namespace nsk {

/// Environment variable that overrides the output directory of the config.
inline constexpr const char* kOutputDirEnv = "NSK_OUTPUT_DIR";
inline constexpr const char* kDefaultOutputDir = "nsk-out";

/// Smallest accepted ablation gap, and the fit resolution subtracted from it
/// (finite windows approach the asymptotic gap of 1/2 from below).
inline constexpr double kAblationGapThreshold = 0.5;
inline constexpr double kAblationGapResolution = 1e-3;

/// Relative agreement required between two routes to the same number
/// (Gram vs field pipeline, closed-form vs oracle symbols).
inline constexpr double kRouteTolerance = 1e-6;

struct ScenarioOutcome {
  ScenarioKind kind = ScenarioKind::LinearDecay;
  std::filesystem::path out_dir;
  /// False when the scenario stopped on an error.
  bool executed = false;
  bool passed = false;
  std::string error_kind;
  std::string error_message;
  /// One line per verdict, for the terminal.
  std::vector<std::string> lines;
};

/// 0 when every verdict passes, 2 on verdict failures, 1 on execution errors.
int exit_code(const ScenarioOutcome& outcome);
int exit_code(const std::vector<ScenarioOutcome>& outcomes);

/// Precedence: explicit flag, then the environment variable, then the
/// config's output_dir, then kDefaultOutputDir.
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag,
                                         const std::string& config_dir);

/// Runs one scenario and writes manifest.json, series/*.csv, report.json and
/// plots/*.svg under `out_dir`. Errors are caught: the outcome records them
/// and whatever was already produced stays on disk.
ScenarioOutcome run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

/// A sweep file is {"scenarios": [config, ...]}. `seed_override` applies to
/// every entry.
std::vector<ScenarioConfig> parse_sweep(const std::string& text,
                                        std::optional<std::uint64_t> seed_override = std::nullopt);

/// Runs the scenarios on `threads` workers, each into out_dir/NN-kind, and
/// writes a summary report.json and manifest.json into out_dir.
std::vector<ScenarioOutcome> run_sweep(const std::vector<ScenarioConfig>& scenarios,
                                       const std::filesystem::path& out_dir, unsigned threads);

}  // namespace nsk
