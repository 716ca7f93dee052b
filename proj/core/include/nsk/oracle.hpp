#pragma once

#include <span>

#include "nsk/symbols.hpp"

namespace nsk {

/// exp(t A(xi)) by Pade scaling-and-squaring of the generator. Ground truth
/// for solution_symbol; shares nothing with the closed-form path except the
/// generator itself.
ModeMatrix matexp_oracle(const FluidParams& params, std::span<const double> xi, double t);

/// exp(t A(xi)) by integrating Y' = A Y, Y(0) = I with an adaptive
/// Dormand-Prince 5(4) pair. Cross-check for matexp_oracle.
ModeMatrix ode_oracle(const FluidParams& params, std::span<const double> xi, double t,
                      double tol = 1e-12);

/// Y' = A Y from Y(0) = Y0 over [0, t]; general entry point behind ode_oracle.
ModeMatrix integrate_linear(const ModeMatrix& A, const ModeMatrix& Y0, double t, double tol);

}  // namespace nsk
