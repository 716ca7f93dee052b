#include "nsk/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "nsk/errors.hpp"

namespace nsk {

ModeMatrix matexp_oracle(const FluidParams& params, std::span<const double> xi, double t) {
  if (t < 0) throw InvalidArgument("matexp_oracle: t must be non-negative");
  const ModeMatrix A = generator_matrix(params, xi);
  if (t == 0.0) return ModeMatrix::Identity(A.rows(), A.cols());
  const ModeMatrix tA = t * A;
  return tA.exp();
}

ModeMatrix integrate_linear(const ModeMatrix& A, const ModeMatrix& Y0, double t, double tol) {
  // Dormand-Prince 5(4) tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2, (void)c3, (void)c4, (void)c5;

  ModeMatrix Y = Y0;
  if (t == 0.0) return Y;
  const double anorm = std::max(A.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
  double h = std::min(t, 0.1 / anorm);
  double s = 0.0;
  ModeMatrix k1 = A * Y;
  int guard = 0;
  while (s < t) {
    if (++guard > 10'000'000) throw InvalidArgument("integrate_linear: step budget exhausted");
    h = std::min(h, t - s);
    const ModeMatrix k2 = A * (Y + h * (a21 * k1));
    const ModeMatrix k3 = A * (Y + h * (a31 * k1 + a32 * k2));
    const ModeMatrix k4 = A * (Y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const ModeMatrix k5 = A * (Y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const ModeMatrix k6 = A * (Y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const ModeMatrix Yn = Y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const ModeMatrix k7 = A * Yn;
    const ModeMatrix err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    // Error is measured against the running scale of the solution; the columns of a
    // decaying semigroup shrink together, so a global scale keeps the test relative.
    const double scale = std::max(Y.cwiseAbs().maxCoeff(), Yn.cwiseAbs().maxCoeff());
    const double en = err.cwiseAbs().maxCoeff() / (tol * std::max(scale, 1e-300));
    if (en <= 1.0) {
      s += h;
      Y = Yn;
      k1 = k7;
    }
    const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h *= fac;
  }
  return Y;
}

ModeMatrix ode_oracle(const FluidParams& params, std::span<const double> xi, double t,
                      double tol) {
  if (t < 0) throw InvalidArgument("ode_oracle: t must be non-negative");
  const ModeMatrix A = generator_matrix(params, xi);
  return integrate_linear(A, ModeMatrix::Identity(A.rows(), A.cols()), t, tol);
}

}  // namespace nsk
