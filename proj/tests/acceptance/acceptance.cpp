// Acceptance run: one PASS/FAIL line per criterion. Tolerances are pinned here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <unistd.h>

#include "nsk/config.hpp"
#include "nsk/decay.hpp"
#include "nsk/errors.hpp"
#include "nsk/integrator.hpp"
#include "nsk/log.hpp"
#include "nsk/report.hpp"
#include "nsk/scenario.hpp"
#include "nsk/verify.hpp"

using namespace nsk;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240611;

// Criterion tolerances.
constexpr double kSymbolTol = 1e-10;
constexpr double kSymbolSeconds = 60.0;
constexpr double kContinuityTol = 1e-6;
constexpr double kExponentTol = 0.1;
constexpr double kHeatTol = 0.05;
constexpr double kRouteTol = 1e-6;
constexpr double kGapMin = kAblationGapThreshold - kAblationGapResolution;
constexpr double kMeanDriftTol = 1e-10;
constexpr double kSymmetryTol = 1e-12;
constexpr double kDoublingRatioMax = 2.5;
constexpr double kOrderLo = 3.6, kOrderHi = 4.4;

int failures = 0;

void verdict(int id, bool ok, const std::string& name, const std::string& detail, double seconds) {
  std::printf("%s criterion %d: %s | %s | %.1fs\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Runs `body`, turning an exception into a failed criterion.
void criterion(int id, const std::string& name, const std::function<bool(std::string&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const Error& e) {
    detail += " error " + e.kind() + ": " + e.what();
  } catch (const std::exception& e) {
    detail += std::string(" error: ") + e.what();
  }
  verdict(id, ok, name, detail,
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

FluidParams reference() { return make_params(1, 0, 1, 1, critical_quadratic(1, 1)); }

double max_abs_diff(const SpectralState& a, const SpectralState& b) {
  double w = 0;
  for (std::size_t i = 0; i < a.theta_hat.data().size(); ++i)
    w = std::max(w, std::abs(a.theta_hat.data()[i] - b.theta_hat.data()[i]));
  for (std::size_t i = 0; i < a.m_hat.data().size(); ++i)
    w = std::max(w, std::abs(a.m_hat.data()[i] - b.m_hat.data()[i]));
  return w;
}

// Low-band L2 -> Linf fit with the Gram route, checked against the field pipeline.
bool low_band(int dim, std::size_t n, double L, std::string& detail) {
  const FluidParams p = reference();
  const Grid grid(dim, n, L);
  const LowBandProbe probe{p, grid, CutoffSpec(0.5 * grid.xi_max()), DataForm::Divergence, true, true};
  const auto times = log_spaced(5, 50, 16);
  const auto s = sample_series("low", times, [&](double t) { return low_band_norm_gram(probe, t); });
  FitOptions opt{kExponentTol, trust_horizon(p, grid, grid.spacing(), true)};
  const auto r = fit_decay(s, {5, 50}, predicted_exponent(dim, kInfinity, 2, 0), opt);
  double route = 0;
  for (double t : {5.0, 50.0}) {
    const double a = low_band_norm_gram(probe, t), b = low_band_norm_pipeline(probe, t);
    route = std::max(route, std::abs(a - b) / a);
  }
  detail += "N=" + std::to_string(dim) + " " + std::to_string(n) + "^" + std::to_string(dim) +
            fmt(" L=%g:", L) + fmt(" fitted %.4f", r.fitted_exponent) +
            fmt(" predicted %.4f", r.predicted_exponent) + fmt(" trust %.1f", opt.trust_end) +
            fmt(" pipeline gap %.1e; ", route);
  return r.verdict && route <= kRouteTol;
}

NonlinearScenario nonlinear(std::size_t n, double L, double amplitude, double dt, double T,
                            std::size_t sample_every, double width) {
  NonlinearScenario s{reference(), Grid(3, n, L)};
  s.amplitude = amplitude;
  s.dt = dt;
  s.horizon = T;
  s.sample_every = sample_every;
  s.seed = kSeed;
  s.density_width = width;
  s.tensor_width = width;
  return s;
}

}  // namespace

int main() {
  set_warning_sink([](const std::string& m) { std::printf("  note: %s\n", m.c_str()); });

  criterion(1, "symbol-oracle equivalence", [](std::string& d) {
    SymbolConfig c;
    c.samples_per_regime = 1000;
    c.tolerance = kSymbolTol;
    const auto t0 = std::chrono::steady_clock::now();
    const auto v = verify_symbols(c, kSeed);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = secs < kSymbolSeconds;
    for (const auto& r : v.regimes) {
      d += std::string(regime_name(r.regime)) + fmt(" %.2e ", r.max_deviation);
      ok = ok && r.verdict && r.samples == 1000;
    }
    d += fmt("(tol %.0e)", kSymbolTol);
    return ok;
  });

  criterion(2, "degeneracy continuity", [](std::string& d) {
    SymbolConfig c;
    c.samples_per_regime = 1;
    c.continuity_tolerance = kContinuityTol;
    const auto v = verify_symbols(c, kSeed + 1);
    // Fixed (xi, t) sweep of delta* through 0: alpha + beta = 2, rho kappa = 1 - delta.
    const double xi[3] = {0.6, -0.3, 0.45};
    const double t = 3.0;
    const auto at = [&](double delta) {
      return solution_symbol(make_params(1.5, 0.5, 1.0 - delta, 1.0, critical_quadratic(1, 1)), xi, t);
    };
    const ModeMatrix at0 = at(0.0);
    // Branch-switch jump for |delta*| <= 1e-8, and the difference quotient across
    // scales, which stays bounded for a continuous (Lipschitz) symbol.
    double sweep = 0, q_min = INFINITY, q_max = 0;
    for (int k = 4; k <= 14; ++k) {
      const double delta = std::pow(10.0, -k);
      const ModeMatrix plus = at(delta), minus = at(-delta);
      if (k >= 8) sweep = std::max(sweep, (plus - minus).cwiseAbs().maxCoeff());
      if (k <= 10) {
        const double q = std::max((plus - at0).cwiseAbs().maxCoeff(), (minus - at0).cwiseAbs().maxCoeff()) / delta;
        q_min = std::min(q_min, q);
        q_max = std::max(q_max, q);
      }
    }
    d += fmt("random trials max jump %.2e", v.continuity.max_jump) +
         fmt(", fixed sweep jump %.2e", sweep) + fmt(" (tol %.0e)", kContinuityTol) +
         fmt(", difference quotient in [%.3f,", q_min) + fmt(" %.3f]", q_max);
    return v.continuity.verdict && sweep <= kContinuityTol && q_max <= 10 * q_min;
  });

  criterion(3, "low-band divergence-form decay", [](std::string& d) {
    const bool a = low_band(3, 128, 200, d);
    const bool b = low_band(2, 256, 200, d);
    d += fmt("tol %.2f", kExponentTol);
    return a && b;
  });

  criterion(4, "divergence-form ablation", [](std::string& d) {
    const FluidParams p = reference();
    const Grid grid(3, 128, 200);
    AblationScenario s{p, grid, CutoffSpec(0.5 * grid.xi_max())};
    const auto r = divergence_form_ablation(s);
    AblationScenario so = s;
    so.source = oracle_symbol_table;
    const auto ro = divergence_form_ablation(so);
    d += fmt("divergence %.4f", r.divergence.fitted_exponent) + fmt(" generic %.4f", r.generic.fitted_exponent) +
         fmt(" gap %.5f", r.gap) + fmt(" oracle gap %.5f", ro.gap) + fmt(" (gate %.3f)", kGapMin);
    return r.divergence.verdict && r.generic.fitted_exponent > r.divergence.fitted_exponent &&
           std::abs(ro.gap - r.gap) <= kRouteTol && r.gap >= kGapMin && ro.gap >= kGapMin;
  });

  criterion(5, "high-band W^{1,0} decay", [](std::string& d) {
    const FluidParams p = reference();
    const Grid grid(3, 64, 40);
    const HighBandProbe probe{p, grid, CutoffSpec(0.3), 1};
    const auto times = log_spaced(0.05, 0.5, 16);
    const auto s = sample_series("high", times, [&](double t) { return high_band_norm_modes(probe, t).norm; });
    FitOptions opt{kExponentTol, trust_horizon(p, grid, grid.spacing(), true)};
    const auto r = fit_decay(s, {0.05, 0.5}, predicted_exponent(3, 2, 2, 1), opt);
    double route = 0;
    for (double t : {0.05, 0.5}) {
      const double a = high_band_norm_modes(probe, t).norm;
      route = std::max(route, std::abs(a - high_band_norm_pipeline(probe, t)) / a);
    }
    d += fmt("fitted %.4f", r.fitted_exponent) + fmt(" predicted %.2f", r.predicted_exponent) +
         fmt(" trust %.2f", opt.trust_end) + fmt(" pipeline gap %.1e", route) + fmt(" (tol %.2f)", kExponentTol);
    return r.verdict && route <= kRouteTol;
  });

  criterion(6, "heat-block anchor", [](std::string& d) {
    const FluidParams p = reference();
    const Grid grid(3, 128, 150);
    const auto s = sample_series("heat", log_spaced(5, 50, 16), [&](double t) { return heat_anchor_linf(p, grid, t); });
    FitOptions opt{kHeatTol, trust_horizon(p, grid, grid.spacing(), false)};
    const auto r = fit_decay(s, {5, 50}, -1.5, opt);
    d += fmt("fitted %.4f", r.fitted_exponent) + fmt(" predicted -1.5 trust %.1f", opt.trust_end) +
         fmt(" (tol %.2f)", kHeatTol);
    return r.verdict;
  });

  criterion(7, "conservation over 10^4 steps", [](std::string& d) {
    const auto s = nonlinear(16, 16, 0.05, 0.01, 100.0, 2500, 0.15);
    const auto r = run(s);
    d += "steps " + std::to_string(r.steps) + fmt(" mean drift %.2e", r.mean_theta_drift) +
         fmt(" symmetry defect %.2e", r.max_symmetry_defect) + fmt(" (tol %.0e", kMeanDriftTol) +
         fmt(", %.0e)", kSymmetryTol);
    return r.completed && r.steps == 10000 && r.mean_theta_drift <= kMeanDriftTol &&
           r.max_symmetry_defect <= kSymmetryTol;
  });

  criterion(8, "nonlinear small-data boundedness", [](std::string& d) {
    double finals[2] = {0, 0};
    bool ok = true;
    int idx = 0;
    for (double eps : {0.01, 0.02}) {
      const auto s = nonlinear(32, 64, eps, 0.25, 100.0, 20, 0.08);
      const auto r = run(s);
      const double rho = s.params.rho_star();
      bool range = true, monotone = true;
      for (double v : r.density_min.values()) range = range && v >= 0.25 * rho;
      for (double v : r.density_max.values()) range = range && v <= 4 * rho;
      const auto& a = r.aggregate.values();
      for (std::size_t i = 1; i < a.size(); ++i) monotone = monotone && a[i] >= a[i - 1];
      finals[idx++] = a.empty() ? INFINITY : a.back();
      ok = ok && r.completed && range && monotone && std::isfinite(finals[idx - 1]);
      d += fmt("eps %.2f:", eps) + (r.completed ? " completed" : " stopped") + (range ? " in range" : " OUT OF RANGE") +
           (monotone ? " monotone" : " non-monotone") + fmt(" N(T)=%.5g; ", finals[idx - 1]);
    }
    const double ratio = finals[1] / finals[0];
    d += fmt("doubling ratio %.4f", ratio) + fmt(" (max %.1f)", kDoublingRatioMax);
    return ok && ratio <= kDoublingRatioMax;
  });

  criterion(9, "ETDRK2 self-convergence order", [](std::string& d) {
    const auto s = nonlinear(16, 16, 0.05, 0.1, 2.0, 1, 0.15);
    const SpectralState u0 = to_spectral(initial_data(s));
    std::vector<SpectralState> sol;
    for (double dt : {0.2, 0.1, 0.05, 0.025}) sol.push_back(integrate(u0, s.params, 2.0, dt));
    const double r1 = max_abs_diff(sol[0], sol[1]) / max_abs_diff(sol[1], sol[2]);
    const double r2 = max_abs_diff(sol[1], sol[2]) / max_abs_diff(sol[2], sol[3]);
    d += fmt("ratios %.3f", r1) + fmt(", %.3f", r2) + fmt(" (window [%.1f,", kOrderLo) + fmt(" %.1f])", kOrderHi);
    return r1 >= kOrderLo && r1 <= kOrderHi && r2 >= kOrderLo && r2 <= kOrderHi;
  });

  criterion(10, "determinism", [](std::string& d) {
    const fs::path base = fs::temp_directory_path() / ("nsk-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(base);
    const auto c = parse_config(R"({"kind": "nonlinear-run", "params": {}, "grid": {"dim": 3, "n": 16, "box_len": 16},
      "nonlinear": {"amplitude": 0.05, "horizon": 2, "dt": 0.1, "sample_every": 2,
                    "density_width": 0.15, "tensor_width": 0.15}})",
                                std::nullopt, kSeed);
    const auto a = run_scenario(c, base / "a");
    const auto b = run_scenario(c, base / "b");
    std::size_t files = 0, same = 0;
    for (const auto& e : fs::directory_iterator(base / "a" / "series")) {
      ++files;
      same += read_file(e.path()) == read_file(base / "b" / "series" / e.path().filename());
    }
    fs::remove_all(base);
    d += std::to_string(same) + "/" + std::to_string(files) + " series files byte-identical";
    return exit_code(a) == 0 && exit_code(b) == 0 && files > 0 && same == files;
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
