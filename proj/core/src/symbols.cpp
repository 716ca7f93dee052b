#include "nsk/symbols.hpp"

#include <cmath>

#include "nsk/errors.hpp"

namespace nsk {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// expm1(x)/x for x >= 0.
double phi1(double x) {
  if (x < 1e-8) return 1.0 + 0.5 * x;
  return std::expm1(x) / x;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// cosh(sqrt(z)) and sinh(sqrt(z))/sqrt(z), continued to z < 0 as cos and sinc.
void even_odd_parts(double z, double& c, double& sc) {
  if (std::abs(z) < 1e-4) {
    c = 1.0 + z / 2.0 + z * z / 24.0 + z * z * z / 720.0;
    sc = 1.0 + z / 6.0 + z * z / 120.0 + z * z * z / 5040.0;
    return;
  }
  if (z > 0) {
    const double s = std::sqrt(z);
    c = std::cosh(s);
    sc = std::sinh(s) / s;
  } else {
    const double s = std::sqrt(-z);
    c = std::cos(s);
    sc = std::sin(s) / s;
  }
}

}  // namespace

const char* regime_name(Regime r) noexcept {
  switch (r) {
    case Regime::PositiveReal:
      return "positive-real";
    case Regime::NegativeOscillatory:
      return "negative-oscillatory";
    case Regime::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

Discriminant discriminant(const FluidParams& params) {
  const double half = 0.5 * (params.alpha_star() + params.beta_star());
  Discriminant disc;
  disc.value = params.delta_star();
  if (std::abs(disc.value) <= kDegeneracyTol * half * half)
    disc.regime = Regime::Degenerate;
  else
    disc.regime = disc.value > 0 ? Regime::PositiveReal : Regime::NegativeOscillatory;
  return disc;
}

EigenPair eigenvalues(const FluidParams& params, double xi_sq) {
  if (xi_sq < 0) throw InvalidArgument("eigenvalues: |xi|^2 must be non-negative");
  const Discriminant disc = discriminant(params);
  const double l0 = -0.5 * (params.alpha_star() + params.beta_star()) * xi_sq;
  switch (disc.regime) {
    case Regime::PositiveReal: {
      const double s = std::sqrt(disc.value) * xi_sq;
      return {disc.regime, {l0 + s, 0.0}, {l0 - s, 0.0}};
    }
    case Regime::NegativeOscillatory: {
      const double w = std::sqrt(-disc.value) * xi_sq;
      return {disc.regime, {l0, w}, {l0, -w}};
    }
    case Regime::Degenerate:
      break;
  }
  return {Regime::Degenerate, {l0, 0.0}, {l0, 0.0}};
}

SymbolCoefficients symbol_coefficients(const FluidParams& params, const Discriminant& disc,
                                       double xi_sq, double t) {
  SymbolCoefficients c;
  if (xi_sq == 0.0) {
    c.c1 = t;
    return c;
  }
  const double r = xi_sq;
  const double l0 = -0.5 * (params.alpha_star() + params.beta_star()) * r;
  c.heat = std::exp(-params.alpha_star() * r * t);

  switch (disc.regime) {
    case Regime::PositiveReal: {
      const double s = std::sqrt(disc.value) * r;
      const double ep = std::exp((l0 + s) * t);
      const double em = std::exp((l0 - s) * t);
      const double x = 2.0 * s * t;
      // (e+ - e-)/(2s) = t e- phi1(2st); past x ~ 50 the direct difference is exact enough
      // and avoids overflow of expm1.
      c.c1 = x < 50.0 ? t * em * phi1(x) : (ep - em) / (2.0 * s);
      const double ch = 0.5 * (ep + em);
      c.c0 = ch - l0 * c.c1;
      c.d = ch + l0 * c.c1;
      break;
    }
    case Regime::NegativeOscillatory: {
      const double w = std::sqrt(-disc.value) * r;
      const double e0 = std::exp(l0 * t);
      const double x = w * t;
      c.c1 = t * e0 * sinc(x);
      const double ch = e0 * std::cos(x);
      c.c0 = ch - l0 * c.c1;
      c.d = ch + l0 * c.c1;
      break;
    }
    case Regime::Degenerate: {
      // Double root lambda_0: e^{l0 t}(1 - l0 t), t e^{l0 t}, e^{l0 t}(1 + l0 t), plus the
      // series in z = delta* |xi|^4 t^2 that keeps the branch exact for |delta*| <= tol.
      const double e0 = std::exp(l0 * t);
      double ch = 1.0, sc = 1.0;
      even_odd_parts(disc.value * r * r * t * t, ch, sc);
      c.c1 = t * e0 * sc;
      c.c0 = e0 * ch - l0 * c.c1;
      c.d = e0 * ch + l0 * c.c1;
      break;
    }
  }
  return c;
}

ModeMatrix assemble_mode_matrix(const FluidParams& params, const SymbolCoefficients& c,
                                std::span<const double> xi) {
  const auto n = static_cast<Eigen::Index>(xi.size());
  double r = 0.0;
  for (double v : xi) r += v * v;
  ModeMatrix M = ModeMatrix::Zero(n + 1, n + 1);
  M(0, 0) = c.c0;
  const double kr = params.rho_star() * params.kappa_star();
  for (Eigen::Index j = 0; j < n; ++j) {
    M(0, 1 + j) = -kI * c.c1 * xi[j];
    M(1 + j, 0) = -kI * kr * r * c.c1 * xi[j];
    M(1 + j, 1 + j) = c.heat;
    if (r > 0.0)
      for (Eigen::Index k = 0; k < n; ++k) M(1 + j, 1 + k) += (c.d - c.heat) * xi[j] * xi[k] / r;
  }
  return M;
}

ModeMatrix solution_symbol(const FluidParams& params, std::span<const double> xi, double t) {
  if (t < 0) throw InvalidArgument("solution_symbol: t must be non-negative");
  double r = 0.0;
  for (double v : xi) r += v * v;
  return assemble_mode_matrix(params, symbol_coefficients(params, discriminant(params), r, t), xi);
}

ModeMatrix generator_matrix(const FluidParams& params, std::span<const double> xi) {
  const auto n = static_cast<Eigen::Index>(xi.size());
  double r = 0.0;
  for (double v : xi) r += v * v;
  const double a = params.alpha_star();
  const double b = params.beta_star();
  const double kr = params.rho_star() * params.kappa_star();
  ModeMatrix A = ModeMatrix::Zero(n + 1, n + 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    A(0, 1 + j) = -kI * xi[j];
    A(1 + j, 0) = -kI * kr * r * xi[j];
    for (Eigen::Index k = 0; k < n; ++k) A(1 + j, 1 + k) = -b * xi[j] * xi[k];
    A(1 + j, 1 + j) += -a * r;
  }
  return A;
}

}  // namespace nsk
