#pragma once

#include <array>
#include <span>
#include <vector>

#include "nsk/field.hpp"
#include "nsk/fft.hpp"
#include "nsk/symbols.hpp"

namespace nsk {

SpectralState to_spectral(const State& state);
State to_real(const SpectralState& spectral);

/// Wavevector used by differential operators and the semigroup. Components on
/// the Nyquist plane are taken as zero so that every real multiplier maps
/// conjugate-symmetric data to conjugate-symmetric data.
std::array<double, kMaxDim> operator_wavevector(const Grid& grid, std::size_t flat) noexcept;

/// sum of squared signed indices of operator_wavevector; |xi|^2 = this * (2 pi / L)^2.
std::size_t operator_index_sq(const Grid& grid, std::size_t flat) noexcept;

/// Symbol coefficients for every possible operator_index_sq of the grid.
std::vector<SymbolCoefficients> symbol_table(const FluidParams& params, const Grid& grid, double t);

/// Per-mode multiplication by the matrix assembled from table[operator_index_sq].
SpectralState apply_coefficients(const SpectralState& in, const FluidParams& params,
                                 std::span<const SymbolCoefficients> table);

/// Exact linear propagation: per-mode multiplication by solution_symbol(xi, t).
SpectralState apply_semigroup(const SpectralState& in, const FluidParams& params, double t);

/// Smooth radial cutoff phi: 1 on |xi| <= eps, 0 on |xi| >= 2 eps, quintic
/// smoothstep in between.
struct CutoffSpec {
  double eps;

  explicit CutoffSpec(double eps);
  double operator()(double xi_abs) const noexcept;
  static constexpr const char* kProfile = "quintic-smoothstep";
};

/// eps = xi_max / 4.
CutoffSpec default_cutoff(const Grid& grid);

struct BandSplit {
  SpectralState low;
  SpectralState high;
};

/// low = phi * input, high = input - low. Throws EmptyLowBand when no nonzero
/// mode has |xi| <= 2 eps.
BandSplit frequency_split(const SpectralState& in, const CutoffSpec& cutoff);
/// Same weights applied to every component of a single field.
ComplexField low_pass(const ComplexField& in, const CutoffSpec& cutoff);

/// m0_j = sum_k d_k M0_jk, spectrally.
RealField divergence_form_momentum(const RealField& M0);
ComplexField divergence_form_momentum(const ComplexField& M0_hat);

inline constexpr int kMaxDerivativeOrder = 3;
using MultiIndex = std::array<int, kMaxDim>;

/// d^alpha of every component. Throws DerivativeOrderExceeded for |alpha| > 3
/// and InvalidArgument for negative entries.
RealField spectral_derivative(const RealField& f, const MultiIndex& alpha);
/// Multiplies by (i xi)^alpha in place.
void apply_derivative(ComplexField& f_hat, const MultiIndex& alpha);

/// All multi-indices of order exactly k in `dim` variables, lexicographic.
std::vector<MultiIndex> multi_indices(int dim, int k);

}  // namespace nsk
