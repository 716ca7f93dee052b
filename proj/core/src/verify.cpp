#include "nsk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nsk/oracle.hpp"

namespace nsk {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<double> random_wavevector(std::mt19937_64& rng, int dim, double lo, double hi) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> xi(static_cast<std::size_t>(dim));
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& v : xi) {
      v = normal(rng);
      n2 += v * v;
    }
  } while (n2 < 1e-12);
  const double s = uniform(rng, lo, hi) / std::sqrt(n2);
  for (auto& v : xi) v *= s;
  return xi;
}

FluidParams with_alpha_beta_kr(double a, double b, double kr) {
  return make_params(a, b, kr, 1.0, critical_quadratic(1.0, 1.0));
}

}  // namespace

FluidParams draw_regime_params(std::mt19937_64& rng, Regime regime) {
  const double rho = uniform(rng, 0.5, 2.0);
  const double mu = uniform(rng, 0.2, 2.0) * rho;
  const double nu = uniform(rng, -0.15, 1.5) * rho;
  const double half = 0.5 * (mu + nu) / rho;
  double kr = half * half;
  if (regime == Regime::PositiveReal) kr *= uniform(rng, 0.05, 0.9);
  if (regime == Regime::NegativeOscillatory) kr *= uniform(rng, 1.1, 6.0);
  return make_params(mu, nu, kr / rho, rho, critical_quadratic(uniform(rng, 0.1, 3.0), rho));
}

SymbolVerification verify_symbols(const SymbolConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SymbolVerification out;
  const Regime order[3] = {Regime::PositiveReal, Regime::NegativeOscillatory, Regime::Degenerate};
  for (int r = 0; r < 3; ++r) {
    RegimeCheck& check = out.regimes[r];
    check.regime = order[r];
    for (std::size_t s = 0; s < config.samples_per_regime; ++s) {
      const FluidParams p = draw_regime_params(rng, order[r]);
      const int dim = std::uniform_int_distribution<int>(1, 3)(rng);
      const auto xi = random_wavevector(rng, dim, config.xi_min, config.xi_max);
      const double t = uniform(rng, 0.0, config.t_max);
      const ModeMatrix exact = matexp_oracle(p, xi, t);
      const double dev = (solution_symbol(p, xi, t) - exact).norm() / exact.norm();
      if (!(dev <= check.max_deviation)) {
        check.max_deviation = dev;
        check.worst_t = t;
        double n2 = 0.0;
        for (double v : xi) n2 += v * v;
        check.worst_xi = std::sqrt(n2);
      }
      ++check.samples;
    }
    check.verdict = check.max_deviation <= config.tolerance;
  }

  ContinuityCheck& cont = out.continuity;
  cont.trials = 50;
  for (std::size_t trial = 0; trial < cont.trials; ++trial) {
    const double a = uniform(rng, 0.3, 2.0), b = uniform(rng, 0.0, 1.0);
    const double half2 = 0.25 * (a + b) * (a + b);
    const auto xi = random_wavevector(rng, 3, config.xi_min, config.xi_max);
    const double t = uniform(rng, 0.1, config.t_max);
    const ModeMatrix degen = solution_symbol(with_alpha_beta_kr(a, b, half2), xi, t);
    double jump = 0.0;
    for (double delta : {1e-8, -1e-8}) {
      const ModeMatrix m = solution_symbol(with_alpha_beta_kr(a, b, half2 - delta), xi, t);
      jump = std::max(jump, (m - degen).cwiseAbs().maxCoeff());
    }
    for (double side : {1.0, -1.0}) {
      const double edge = side * kDegeneracyTol * half2;
      const ModeMatrix inside = solution_symbol(with_alpha_beta_kr(a, b, half2 - 0.999 * edge), xi, t);
      const ModeMatrix outside = solution_symbol(with_alpha_beta_kr(a, b, half2 - 1.001 * edge), xi, t);
      jump = std::max(jump, (inside - outside).cwiseAbs().maxCoeff());
    }
    if (!std::isfinite(jump)) jump = INFINITY;
    cont.max_jump = std::max(cont.max_jump, jump);
  }
  cont.verdict = cont.max_jump <= config.continuity_tolerance;

  out.verdict = cont.verdict;
  for (const auto& r : out.regimes) out.verdict = out.verdict && r.verdict;
  return out;
}

}  // namespace nsk
