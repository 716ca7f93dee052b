#include "nsk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nsk/errors.hpp"

namespace nsk {

namespace {
constexpr cplx kI{0.0, 1.0};
}

SpectralState to_spectral(const State& state) {
  require_same_grid(state.theta.grid(), state.m.grid(), "to_spectral");
  SpectralState s(state.grid());
  s.theta_hat = forward_transform(state.theta);
  s.m_hat = forward_transform(state.m);
  return s;
}

State to_real(const SpectralState& spectral) {
  require_same_grid(spectral.theta_hat.grid(), spectral.m_hat.grid(), "to_real");
  return State(inverse_transform_real(spectral.theta_hat), inverse_transform_real(spectral.m_hat));
}

std::array<double, kMaxDim> operator_wavevector(const Grid& grid, std::size_t flat) noexcept {
  const auto idx = grid.unflatten(flat);
  std::array<double, kMaxDim> xi{};
  const double unit = grid.wavenumber_unit();
  for (int d = 0; d < grid.dim(); ++d)
    xi[d] = grid.is_nyquist(idx[d]) ? 0.0 : unit * static_cast<double>(grid.signed_index(idx[d]));
  return xi;
}

std::size_t operator_index_sq(const Grid& grid, std::size_t flat) noexcept {
  const auto idx = grid.unflatten(flat);
  std::size_t s = 0;
  for (int d = 0; d < grid.dim(); ++d) {
    if (grid.is_nyquist(idx[d])) continue;
    const long k = grid.signed_index(idx[d]);
    s += static_cast<std::size_t>(k * k);
  }
  return s;
}

std::vector<SymbolCoefficients> symbol_table(const FluidParams& params, const Grid& grid, double t) {
  if (t < 0) throw InvalidArgument("symbol_table: t must be non-negative");
  const std::size_t kmax = grid.n() / 2 - 1;
  const std::size_t entries = static_cast<std::size_t>(grid.dim()) * kmax * kmax + 1;
  const double unit_sq = grid.wavenumber_unit() * grid.wavenumber_unit();
  const Discriminant disc = discriminant(params);
  std::vector<SymbolCoefficients> table(entries);
  for (std::size_t m = 0; m < entries; ++m)
    table[m] = symbol_coefficients(params, disc, static_cast<double>(m) * unit_sq, t);
  return table;
}

SpectralState apply_coefficients(const SpectralState& in, const FluidParams& params,
                                 std::span<const SymbolCoefficients> table) {
  const Grid& g = in.grid();
  const int dim = g.dim();
  const double kr = params.kappa_star() * params.rho_star();
  SpectralState out(g);
  auto th_in = in.theta_hat.component(0);
  auto th_out = out.theta_hat.component(0);
  std::array<std::span<const cplx>, kMaxDim> m_in;
  std::array<std::span<cplx>, kMaxDim> m_out;
  for (int d = 0; d < dim; ++d) {
    m_in[d] = in.m_hat.component(d);
    m_out[d] = out.m_hat.component(d);
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto xi = operator_wavevector(g, k);
    const SymbolCoefficients& c = table[operator_index_sq(g, k)];
    double r = 0.0;
    cplx xm{};
    for (int d = 0; d < dim; ++d) {
      r += xi[d] * xi[d];
      xm += xi[d] * m_in[d][k];
    }
    const cplx th = th_in[k];
    th_out[k] = c.c0 * th - kI * c.c1 * xm;
    if (r == 0.0) {
      for (int d = 0; d < dim; ++d) m_out[d][k] = m_in[d][k];
      continue;
    }
    const cplx longit = (c.d - c.heat) * xm / r;
    const cplx capil = -kI * kr * r * c.c1 * th;
    for (int d = 0; d < dim; ++d) m_out[d][k] = c.heat * m_in[d][k] + (longit + capil) * xi[d];
  }
  return out;
}

SpectralState apply_semigroup(const SpectralState& in, const FluidParams& params, double t) {
  if (t < 0) throw InvalidArgument("apply_semigroup: t must be non-negative");
  const auto table = symbol_table(params, in.grid(), t);
  return apply_coefficients(in, params, table);
}

CutoffSpec::CutoffSpec(double e) : eps(e) {
  if (!(e > 0) || !std::isfinite(e)) throw InvalidArgument("cutoff eps must be positive");
}

double CutoffSpec::operator()(double xi_abs) const noexcept {
  const double s = std::clamp((xi_abs - eps) / eps, 0.0, 1.0);
  const double step = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
  return 1.0 - step;
}

CutoffSpec default_cutoff(const Grid& grid) { return CutoffSpec(0.25 * grid.xi_max()); }

namespace {

std::vector<double> cutoff_weights(const Grid& g, const CutoffSpec& cutoff) {
  std::vector<double> w(g.size());
  bool any = false;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto xi = g.wavevector(k);
    double r = 0.0;
    for (int d = 0; d < g.dim(); ++d) r += xi[d] * xi[d];
    const double a = std::sqrt(r);
    if (a > 0.0 && a <= 2.0 * cutoff.eps) any = true;
    w[k] = cutoff(a);
  }
  if (!any)
    throw EmptyLowBand("no nonzero mode has |xi| <= 2 eps = " + std::to_string(2.0 * cutoff.eps) +
                       " (smallest is " + std::to_string(g.wavenumber_unit()) + ")");
  return w;
}

void split_field(const ComplexField& in, const std::vector<double>& w, ComplexField& low,
                 ComplexField& high) {
  for (std::size_t c = 0; c < in.components(); ++c) {
    auto src = in.component(c);
    auto lo = low.component(c);
    auto hi = high.component(c);
    for (std::size_t k = 0; k < src.size(); ++k) {
      lo[k] = w[k] * src[k];
      hi[k] = src[k] - lo[k];
    }
  }
}

}  // namespace

BandSplit frequency_split(const SpectralState& in, const CutoffSpec& cutoff) {
  const Grid& g = in.grid();
  const auto w = cutoff_weights(g, cutoff);
  BandSplit out{SpectralState(g), SpectralState(g)};
  split_field(in.theta_hat, w, out.low.theta_hat, out.high.theta_hat);
  split_field(in.m_hat, w, out.low.m_hat, out.high.m_hat);
  return out;
}

ComplexField low_pass(const ComplexField& in, const CutoffSpec& cutoff) {
  const auto w = cutoff_weights(in.grid(), cutoff);
  ComplexField low(in.grid(), in.components()), high(in.grid(), in.components());
  split_field(in, w, low, high);
  return low;
}

ComplexField divergence_form_momentum(const ComplexField& M0_hat) {
  const Grid& g = M0_hat.grid();
  const int dim = g.dim();
  if (M0_hat.components() != static_cast<std::size_t>(dim * dim))
    throw InvalidArgument("divergence_form_momentum expects an N x N tensor field");
  ComplexField out(g, static_cast<std::size_t>(dim));
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto xi = operator_wavevector(g, k);
    for (int j = 0; j < dim; ++j) {
      cplx acc{};
      for (int l = 0; l < dim; ++l) acc += kI * xi[l] * M0_hat.tensor(j, l)[k];
      out.component(j)[k] = acc;
    }
  }
  return out;
}

RealField divergence_form_momentum(const RealField& M0) {
  return inverse_transform_real(divergence_form_momentum(forward_transform(M0)));
}

void apply_derivative(ComplexField& f_hat, const MultiIndex& alpha) {
  const Grid& g = f_hat.grid();
  int order = 0;
  for (int d = 0; d < kMaxDim; ++d) {
    if (alpha[d] < 0) throw InvalidArgument("multi-index entries must be non-negative");
    if (d >= g.dim() && alpha[d] != 0)
      throw InvalidArgument("multi-index has entries beyond the grid dimension");
    order += alpha[d];
  }
  if (order > kMaxDerivativeOrder)
    throw DerivativeOrderExceeded("derivative order " + std::to_string(order) + " exceeds " +
                                  std::to_string(kMaxDerivativeOrder));
  if (order == 0) return;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto xi = operator_wavevector(g, k);
    cplx factor{1.0, 0.0};
    for (int d = 0; d < g.dim(); ++d)
      for (int p = 0; p < alpha[d]; ++p) factor *= kI * xi[d];
    for (std::size_t c = 0; c < f_hat.components(); ++c) f_hat.component(c)[k] *= factor;
  }
}

RealField spectral_derivative(const RealField& f, const MultiIndex& alpha) {
  ComplexField c = forward_transform(f);
  apply_derivative(c, alpha);
  return inverse_transform_real(c);
}

std::vector<MultiIndex> multi_indices(int dim, int k) {
  std::vector<MultiIndex> out;
  MultiIndex a{};
  // Enumerate compositions of k into dim parts, lexicographically descending in a[0].
  auto rec = [&](auto&& self, int d, int left) -> void {
    if (d == dim - 1) {
      a[d] = left;
      out.push_back(a);
      return;
    }
    for (int v = left; v >= 0; --v) {
      a[d] = v;
      self(self, d + 1, left - v);
    }
    a[d] = 0;
  };
  if (dim >= 1 && k >= 0) rec(rec, 0, k);
  return out;
}

}  // namespace nsk
