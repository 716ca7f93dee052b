#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nsk/norms.hpp"
#include "nsk/spectral.hpp"

namespace nsk {

/// -N/2 (1/q - 1/p) - j/2, with 1/inf = 0.
double predicted_exponent(int dim, double p, double q, int j);

struct FitWindow {
  double a;
  double b;
};

struct DecayReport {
  std::string label;
  double fitted_exponent = 0.0;
  double predicted_exponent = 0.0;
  /// RMS of log(value) about the fitted line.
  double residual = 0.0;
  double tolerance = 0.1;
  FitWindow window{0.0, 0.0};
  std::size_t samples = 0;
  bool trust_window_ok = false;
  bool verdict = false;
};

struct FitOptions {
  double tolerance = 0.1;
  /// Largest time at which the periodic box still resolves the solution.
  double trust_end = std::numeric_limits<double>::infinity();
};

/// Least-squares slope of log(value) against log(t) over the samples in the
/// window. Throws NonPositiveSeries, WindowOutsideTrust, WindowUncovered.
DecayReport fit_decay(const NormSeries& series, FitWindow window, double predicted,
                      const FitOptions& options = {});

/// n log-spaced times from a to b inclusive.
std::vector<double> log_spaced(double a, double b, std::size_t n);

/// Fastest diffusive spreading rate of the linear flow,
/// max(alpha*, (alpha*+beta*)/2 + sqrt(max(delta*, 0))).
double spreading_rate(const FluidParams& params);

/// sqrt of the 0.99 chi-square quantile with N degrees of freedom: the 99%
/// mass radius of a unit isotropic Gaussian.
double mass_radius_factor(int dim);

/// 99% mass radius at time t of a response that starts with width w:
/// factor * sqrt(w^2 + c D t), c = 2 for Gaussian data and 4 for extremal
/// probes (whose profile is the squared kernel).
double mass_radius_99(const FluidParams& params, int dim, double width, double t, bool extremal);

/// Last time at which mass_radius_99 stays below L/4.
double trust_horizon(const FluidParams& params, const Grid& grid, double width, bool extremal);

/// Coefficient table for all |xi|^2 of a grid at time t.
using CoefficientSource =
    std::function<std::vector<SymbolCoefficients>(const FluidParams&, const Grid&, double)>;

/// Coefficient table read off matexp_oracle along a coordinate axis.
std::vector<SymbolCoefficients> oracle_symbol_table(const FluidParams& params, const Grid& grid,
                                                    double t);

/// Initial-data class for the low-band probe.
enum class DataForm {
  Divergence,  ///< momentum data g = Div G, measured in L2 of G
  Generic,     ///< momentum data g itself
};

/// Low-band L2 -> Linf operator norm of the linear flow, taken over data
/// (f, G) (or (f, g)) and outputs theta alone or (theta, m).
struct LowBandProbe {
  FluidParams params;
  Grid grid;
  CutoffSpec cutoff;
  DataForm form = DataForm::Divergence;
  bool density_data = true;
  bool momentum_output = true;
};

/// Largest eigenvalue route: sqrt(lambda_max(sum_k K_k K_k^*)) / sqrt(V),
/// with K_k the per-mode map from data to outputs.
double low_band_norm_gram(const LowBandProbe& probe, double t,
                          const CoefficientSource& source = symbol_table);

/// The same norm realized on fields: builds the extremal data for time t,
/// sends it through frequency_split, apply_semigroup and to_real, and returns
/// Linf(output) / L2(data).
double low_band_norm_pipeline(const LowBandProbe& probe, double t);

/// High-band operator norm of d^j S(t) in the Hilbert form of W^{1,0}_2
/// (theta weighted by sqrt(1 + |xi|^2)): the largest per-mode singular value.
struct HighBandProbe {
  FluidParams params;
  Grid grid;
  CutoffSpec cutoff;
  int j = 1;
};

struct HighBandValue {
  double norm = 0.0;
  std::size_t mode = 0;
};

HighBandValue high_band_norm_modes(const HighBandProbe& probe, double t);

/// The same norm realized on fields from the extremal single-mode data.
double high_band_norm_pipeline(const HighBandProbe& probe, double t);

/// Linf of the momentum at time t for transverse data P_perp(e_1 delta_0)
/// with unit L1 mass. Stays divergence-free, so only the heat block acts.
double heat_anchor_linf(const FluidParams& params, const Grid& grid, double t);

/// Samples fn at every time into a series.
NormSeries sample_series(const std::string& descriptor, const std::vector<double>& times,
                         const std::function<double(double)>& fn);

struct AblationScenario {
  FluidParams params;
  Grid grid;
  CutoffSpec cutoff;
  FitWindow window{5.0, 50.0};
  std::size_t samples = 16;
  /// L2 size of the data in both runs; 0 gives the degenerate case.
  double amplitude = 1.0;
  double tolerance = 0.1;
  CoefficientSource source = symbol_table;
};

struct AblationReport {
  DecayReport divergence;
  DecayReport generic;
  NormSeries divergence_series;
  NormSeries generic_series;
  /// generic slope - divergence slope.
  double gap = 0.0;
  bool skipped = false;
};

/// Paired low-band theta decay under divergence-form and generic momentum
/// data of equal L2 size.
AblationReport divergence_form_ablation(const AblationScenario& scenario);

}  // namespace nsk
