#pragma once

#include "nsk/field.hpp"
#include "nsk/params.hpp"

namespace nsk {

/// Zeroes every mode with some |k'| > n/3 (signed index).
void dealias(ComplexField& f_hat);

/// mu*(grad u + grad u^T) + (nu* - mu*)(div u) I, derivatives spectral.
RealField viscous_tensor(const RealField& u, const FluidParams& params);

/// kappa*/2 (Lap(rho^2) - |grad rho|^2) I - kappa* grad rho (x) grad rho.
RealField korteweg_tensor(const RealField& rho, const FluidParams& params);

/// int_0^1 P''(rho* + s theta)(1 - s) ds theta^2 by 8-point Gauss-Legendre.
/// Throws ValidityExceeded when rho* + theta leaves the pressure law's interval.
RealField pressure_remainder(const RealField& theta, const FluidParams& params);

/// Bracket tensor H with g = -Div H:
///   m (x) m / (rho* + theta) - S(v) - K(theta) + Pi I,   v = (1/(rho*+theta) - 1/rho*) m,
/// where Pi is pressure_remainder. Every pointwise product is followed by
/// 2/3 truncation. Throws RangeViolation outside rho*/4 <= rho* + theta <= 4 rho*.
ComplexField bracket_tensor_hat(const SpectralState& u, const FluidParams& params);
RealField bracket_tensor(const RealField& theta, const RealField& m, const FluidParams& params);

/// Fourier coefficients of g = -Div H.
ComplexField nonlinearity_g_hat(const SpectralState& u, const FluidParams& params);
RealField nonlinearity_g(const RealField& theta, const RealField& m, const FluidParams& params);

}  // namespace nsk
