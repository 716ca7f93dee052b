#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsk/norms.hpp"
#include "nsk/spectral.hpp"

namespace nsk {

/// Exponents of the solution space and aggregate norm.
struct SpaceExponents {
  double p = 4.0;
  double q1 = 2.5;
  double q2 = 15.0;
  double tau = 0.35;
};

struct NonlinearScenario {
  FluidParams params;
  Grid grid;
  SpaceExponents exponents;
  /// Size of the data relative to rho*.
  double amplitude = 1e-3;
  double horizon = 1.0;
  double dt = 0.1;
  /// Norms are sampled every this many steps (and at t = 0 and T).
  std::size_t sample_every = 10;
  std::uint64_t seed = 0;
  bool linear_only = false;
  /// Gaussian widths of rho_0 and of the envelope of M_0, in box lengths.
  double density_width = 0.08;
  double tensor_width = 0.08;
};

/// Human-readable notes for every exponent or dimension condition of the
/// global theorem that the scenario violates. Empty when inside its scope.
std::vector<std::string> validate_scenario(const NonlinearScenario& s);

/// rho_0 - rho* = amplitude rho* bump, m_0 = Div M_0 with M_0 a Gaussian-
/// enveloped random trigonometric tensor drawn from the scenario seed.
State initial_data(const NonlinearScenario& s);

/// Exponential RK2 (Cox-Matthews) for d/dt u = A u + (0, g(u)), with the
/// linear part propagated exactly. Coefficients are cached per |xi|^2.
class Etdrk2 {
 public:
  Etdrk2(const FluidParams& params, const Grid& grid, double dt, bool linear_only = false);

  double dt() const noexcept { return dt_; }

  /// One step. Throws RangeViolation / ValidityExceeded from the nonlinearity.
  SpectralState step(const SpectralState& u) const;

 private:
  struct Block {
    // phi_1, phi_2 of the real 2x2 longitudinal generator, row-major.
    std::array<double, 4> phi1;
    std::array<double, 4> phi2;
    double phi1_t;
    double phi2_t;
  };

  SpectralState add_phi(const SpectralState& base, const ComplexField& g_hat, bool second) const;

  FluidParams params_;
  Grid grid_;
  double dt_;
  bool linear_only_;
  std::vector<SymbolCoefficients> propagator_;
  std::vector<Block> blocks_;
};

/// d/dt (theta_hat, m_hat) for the full system at u, with g_hat supplied.
SpectralState time_derivative(const SpectralState& u, const ComplexField& g_hat,
                              const FluidParams& params);

/// One step with a fresh integrator; throws StepRejected when the result
/// leaves the range condition.
SpectralState step(const SpectralState& u, const FluidParams& params, double dt);

struct RunEvent {
  double t;
  std::string kind;
  std::string message;
};

struct RunResult {
  SpectralState final_state;
  double final_time = 0.0;
  std::size_t steps = 0;
  NormBundle bundle;
  NormSeries aggregate{"aggregate_N"};
  NormSeries density_min{"density_min"};
  NormSeries density_max{"density_max"};
  NormSeries mean_theta{"mean_theta"};
  std::vector<RunEvent> events;
  /// |mean theta(t) - mean theta(0)| / max(|mean theta(0)|, tiny) over all steps.
  double mean_theta_drift = 0.0;
  /// Largest conjugate-symmetry defect seen after any step.
  double max_symmetry_defect = 0.0;
  bool completed = false;
  std::optional<std::string> error_kind;
  std::optional<std::string> error_message;

  explicit RunResult(const Grid& g) : final_state(g) {}
};

/// Integrates the scenario to its horizon. Domain errors stop the run; the
/// partial result is returned with error_kind set.
RunResult run(const NonlinearScenario& s);

/// Integrates from u0 to T with step dt and no sampling; for convergence studies.
SpectralState integrate(const SpectralState& u0, const FluidParams& params, double T, double dt,
                        bool linear_only = false);

}  // namespace nsk
