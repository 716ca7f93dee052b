#pragma once

#include <functional>
#include <string>
#include <vector>

namespace nsk {

/// Pressure law P(rho) with its first two derivatives on an open validity
/// interval (rho_min, rho_max), rho_min > 0.
struct PressureLaw {
  std::string name;
  std::function<double(double)> evaluate;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  double rho_min = 0.0;
  double rho_max = 0.0;
  /// Coefficients for the built-in families; empty for user triples.
  std::vector<double> coefficients;

  bool contains(double rho) const noexcept { return rho > rho_min && rho < rho_max; }
};

/// P(rho) = K (rho - rho_ref)^2. Critical at rho_ref exactly.
PressureLaw critical_quadratic(double K, double rho_ref);

/// P(rho) = sum_k c[k] (rho - rho_ref)^k. Valid on (rho_min, rho_max).
PressureLaw polynomial_pressure(std::vector<double> coeffs, double rho_ref, double rho_min,
                                double rho_max);

/// Wraps a user-supplied triple. Rejects it with ConstraintViolation unless
/// d1 and d2 agree with centred differences of `evaluate` (and of d1) at a
/// second-order rate across the validity interval.
PressureLaw make_pressure_law(std::string name, std::function<double(double)> evaluate,
                              std::function<double(double)> d1,
                              std::function<double(double)> d2, double rho_min,
                              double rho_max);

/// Largest |d1 - D_h evaluate| and |d2 - D_h d1| over a fixed sample of the
/// validity interval, using the centred difference D_h with step h.
double pressure_fd_defect(const PressureLaw& law, double h);

/// Physical constants of the fluid around the reference state.
class FluidParams {
 public:
  double mu_star() const noexcept { return mu_; }
  double nu_star() const noexcept { return nu_; }
  double kappa_star() const noexcept { return kappa_; }
  double rho_star() const noexcept { return rho_; }
  const PressureLaw& pressure() const noexcept { return pressure_; }

  /// mu*/rho*
  double alpha_star() const noexcept { return alpha_; }
  /// nu*/rho*
  double beta_star() const noexcept { return beta_; }
  /// (alpha* + beta*)^2 / 4 - rho* kappa*
  double delta_star() const noexcept { return delta_; }

 private:
  friend FluidParams make_params(double, double, double, double, PressureLaw);
  FluidParams() = default;

  double mu_ = 0, nu_ = 0, kappa_ = 0, rho_ = 0;
  double alpha_ = 0, beta_ = 0, delta_ = 0;
  PressureLaw pressure_;
};

/// Relative tolerance for |P'(rho*)| against max(1, |P''(rho*)|).
inline constexpr double kCriticalityTol = 1e-12;

/// Validates mu > 0, mu + nu > 0, kappa > 0, rho > 0 and the critical-state
/// condition on the pressure law, then caches alpha*, beta*, delta*.
/// Throws ConstraintViolation / CriticalityViolation.
FluidParams make_params(double mu, double nu, double kappa, double rho_ref, PressureLaw pressure);

}  // namespace nsk
