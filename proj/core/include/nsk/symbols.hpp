#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "nsk/params.hpp"

namespace nsk {

/// Sign class of delta* = (alpha*+beta*)^2/4 - rho* kappa*.
enum class Regime { PositiveReal, NegativeOscillatory, Degenerate };

const char* regime_name(Regime r) noexcept;

struct Discriminant {
  double value = 0.0;
  Regime regime = Regime::Degenerate;
};

/// Relative width of the degenerate band: |delta*| <= tol * (alpha*+beta*)^2/4.
inline constexpr double kDegeneracyTol = 1e-9;

Discriminant discriminant(const FluidParams& params);

/// Roots of lambda^2 + (alpha*+beta*)|xi|^2 lambda + rho* kappa* |xi|^4 = 0.
/// In the degenerate regime both entries hold lambda_0.
struct EigenPair {
  Regime regime;
  std::complex<double> plus;
  std::complex<double> minus;
};

EigenPair eigenvalues(const FluidParams& params, double xi_sq);

/// Scalar coefficients of the per-mode solution operator at (|xi|^2, t).
///
/// With P = xi xi^T / |xi|^2 the (N+1)x(N+1) matrix acting on (theta, m) is
///
///   [ c0                     -i c1 xi^T              ]
///   [ -i rho* kappa* |xi|^2 c1 xi   heat (I - P) + d P ]
///
/// where, in terms of lambda_+- and lambda_0 = -(alpha*+beta*)|xi|^2/2,
///   c1   = (e^{lambda_+ t} - e^{lambda_- t}) / (lambda_+ - lambda_-)
///   c0   = (lambda_+ e^{lambda_- t} - lambda_- e^{lambda_+ t}) / (lambda_+ - lambda_-)
///   d    = (lambda_+ e^{lambda_+ t} - lambda_- e^{lambda_- t}) / (lambda_+ - lambda_-)
///   heat = e^{-alpha* |xi|^2 t}.
/// All four are real in every regime. They are evaluated in cancellation-free
/// forms (expm1 / sinc / a short series around the double root), and take
/// their limits c0 = d = heat = 1, c1 = t at xi = 0.
struct SymbolCoefficients {
  double c0 = 1.0;
  double c1 = 0.0;
  double d = 1.0;
  double heat = 1.0;
};

SymbolCoefficients symbol_coefficients(const FluidParams& params, const Discriminant& disc,
                                       double xi_sq, double t);

/// Dense (N+1)x(N+1) complex matrix acting on (theta_hat, m_hat) at one mode.
using ModeMatrix = Eigen::MatrixXcd;

/// Builds the matrix described at SymbolCoefficients for wavevector xi.
ModeMatrix assemble_mode_matrix(const FluidParams& params, const SymbolCoefficients& c,
                                std::span<const double> xi);

/// exp(t A(xi)) in closed form.
ModeMatrix solution_symbol(const FluidParams& params, std::span<const double> xi, double t);

/// A(xi) with d/dt (theta_hat, m_hat) = A(xi) (theta_hat, m_hat).
ModeMatrix generator_matrix(const FluidParams& params, std::span<const double> xi);

}  // namespace nsk
