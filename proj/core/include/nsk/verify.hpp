#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "nsk/config.hpp"
#include "nsk/symbols.hpp"

namespace nsk {

/// Random fluid parameters whose discriminant falls in `regime`; the
/// degenerate draws sit exactly on delta* = 0.
FluidParams draw_regime_params(std::mt19937_64& rng, Regime regime);

struct RegimeCheck {
  Regime regime = Regime::Degenerate;
  std::size_t samples = 0;
  /// max ||closed form - matexp||_F / ||matexp||_F
  double max_deviation = 0.0;
  double worst_t = 0.0;
  double worst_xi = 0.0;
  bool verdict = false;
};

struct ContinuityCheck {
  std::size_t trials = 0;
  /// Largest entry jump between a degenerate symbol and its neighbours at
  /// |delta*| = 1e-8, and across the edge of the degenerate tolerance band.
  double max_jump = 0.0;
  bool verdict = false;
};

struct SymbolVerification {
  std::array<RegimeCheck, 3> regimes;
  ContinuityCheck continuity;
  bool verdict = false;
};

/// Closed-form symbols against matexp_oracle on random (params, xi, t) in
/// every regime, plus the continuity sweep across delta* = 0.
SymbolVerification verify_symbols(const SymbolConfig& config, std::uint64_t seed);

}  // namespace nsk
