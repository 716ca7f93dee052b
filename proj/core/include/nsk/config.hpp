#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nsk/params.hpp"

namespace nsk {

enum class ScenarioKind { SymbolVerify, LinearDecay, Ablation, NonlinearRun };

const char* kind_name(ScenarioKind k) noexcept;
/// Accepts both the config spelling ("symbol-verify") and the CLI one ("verify-symbols").
std::optional<ScenarioKind> parse_kind(const std::string& s);

struct PressureConfig {
  std::string law = "critical-quadratic";
  double K = 1.0;
  std::vector<double> coefficients;
  double rho_min = 0.0;
  double rho_max = 0.0;
  bool operator==(const PressureConfig&) const = default;
};

struct ParamsConfig {
  double mu_star = 1.0;
  double nu_star = 0.0;
  double kappa_star = 1.0;
  double rho_star = 1.0;
  PressureConfig pressure;
  bool operator==(const ParamsConfig&) const = default;
};

struct GridConfig {
  int dim = 3;
  std::size_t n = 64;
  double box_len = 100.0;
  bool operator==(const GridConfig&) const = default;
};

struct DecayConfig {
  /// "low" (L2 -> Linf, low band), "high" (W^{1,0}_2, high band) or "heat".
  std::string band = "low";
  /// "divergence" or "generic" momentum data (low band only).
  std::string data = "divergence";
  double p = std::numeric_limits<double>::infinity();
  double q = 2.0;
  int j = 0;
  double window_a = 5.0;
  double window_b = 50.0;
  std::size_t samples = 16;
  double tolerance = 0.1;
  /// Absolute cutoff radius; when absent, cutoff_fraction * xi_max.
  std::optional<double> cutoff_eps;
  double cutoff_fraction = 0.25;
  /// Low band: include density data and momentum output.
  bool full_operator = true;
  /// Ablation: repeat the paired runs with oracle-derived symbols.
  bool oracle_check = true;
  double amplitude = 1.0;
  bool operator==(const DecayConfig&) const = default;
};

struct NonlinearConfig {
  double amplitude = 1e-3;
  double horizon = 1.0;
  double dt = 0.1;
  std::size_t sample_every = 10;
  bool linear_only = false;
  double density_width = 0.08;
  double tensor_width = 0.08;
  double p = 4.0;
  double q1 = 2.5;
  double q2 = 15.0;
  double tau = 0.35;
  bool operator==(const NonlinearConfig&) const = default;
};

struct SymbolConfig {
  std::size_t samples_per_regime = 1000;
  double tolerance = 1e-10;
  double xi_min = 0.05;
  double xi_max = 1.5;
  double t_max = 10.0;
  double continuity_tolerance = 1e-6;
  bool operator==(const SymbolConfig&) const = default;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::LinearDecay;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  std::optional<ParamsConfig> params;
  std::optional<GridConfig> grid;
  std::optional<DecayConfig> decay;
  std::optional<NonlinearConfig> nonlinear;
  std::optional<SymbolConfig> symbols;
  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses the JSON scenario format. Missing optional fields take their
/// defaults; blocks required by the kind are filled when absent only if they
/// have no mandatory content. Throws ParseError (with line and column) and
/// ValidationError (naming the field). `default_kind` applies when the text
/// has no "kind"; `seed_override` replaces the seed before validation.
ScenarioConfig parse_config(const std::string& text,
                            std::optional<ScenarioKind> default_kind = std::nullopt,
                            std::optional<std::uint64_t> seed_override = std::nullopt);

/// Pretty-printed JSON with every default written out.
std::string serialize_config(const ScenarioConfig& config);

/// Checks cross-field requirements (blocks for the kind, seed for randomized
/// scenarios, value ranges). Throws ValidationError.
void validate_config(const ScenarioConfig& config);

FluidParams build_params(const ParamsConfig& p);

}  // namespace nsk
