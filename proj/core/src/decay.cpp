#include "nsk/decay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nsk/errors.hpp"
#include "nsk/oracle.hpp"

namespace nsk {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kMaxRows = kMaxDim + 1;
using SmallMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxRows, kMaxRows>;
using SmallVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, kMaxRows, 1>;
using SmallRealMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxRows, kMaxRows>;

SmallMat mode_matrix(const FluidParams& p, const SymbolCoefficients& c,
                     const std::array<double, kMaxDim>& xi, int dim) {
  SmallMat M = SmallMat::Zero(dim + 1, dim + 1);
  double r = 0.0;
  for (int d = 0; d < dim; ++d) r += xi[d] * xi[d];
  const double kr = p.kappa_star() * p.rho_star();
  M(0, 0) = c.c0;
  for (int j = 0; j < dim; ++j) {
    M(0, 1 + j) = -kI * c.c1 * xi[j];
    M(1 + j, 0) = -kI * kr * r * c.c1 * xi[j];
    M(1 + j, 1 + j) = c.heat;
    if (r > 0.0)
      for (int k = 0; k < dim; ++k) M(1 + j, 1 + k) += (c.d - c.heat) * xi[j] * xi[k] / r;
  }
  return M;
}

double true_abs_xi(const Grid& g, std::size_t k) {
  const auto xi = g.wavevector(k);
  double r = 0.0;
  for (int d = 0; d < g.dim(); ++d) r += xi[d] * xi[d];
  return std::sqrt(r);
}

bool on_nyquist(const Grid& g, std::size_t k) {
  const auto idx = g.unflatten(k);
  for (int d = 0; d < g.dim(); ++d)
    if (g.is_nyquist(idx[d])) return true;
  return false;
}

// Rows of the output selector: theta only, or theta and m.
int output_rows(const LowBandProbe& p) { return p.momentum_output ? p.grid.dim() + 1 : 1; }

struct GramResult {
  double lambda_max = 0.0;
  Eigen::VectorXd top;
};

GramResult low_band_gram(const LowBandProbe& probe, double t, const CoefficientSource& source) {
  const Grid& g = probe.grid;
  const int dim = g.dim();
  const int rows = output_rows(probe);
  const auto table = source(probe.params, g, t);
  SmallMat gram = SmallMat::Zero(rows, rows);
  bool any = false;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double phi = probe.cutoff(true_abs_xi(g, k));
    if (phi == 0.0 || on_nyquist(g, k)) continue;
    const auto xi = operator_wavevector(g, k);
    double r = 0.0;
    for (int d = 0; d < dim; ++d) r += xi[d] * xi[d];
    if (r > 0.0 && true_abs_xi(g, k) <= 2.0 * probe.cutoff.eps) any = true;
    const SmallMat M = mode_matrix(probe.params, table[operator_index_sq(g, k)], xi, dim);
    // Data weights B B^*: density 1 (or 0), momentum r for g = Div G, else 1.
    SmallVec dw(dim + 1);
    dw(0) = probe.density_data ? 1.0 : 0.0;
    for (int j = 0; j < dim; ++j) dw(1 + j) = probe.form == DataForm::Divergence ? r : 1.0;
    const SmallMat Mo = M.topRows(rows);
    gram += (phi * phi) * (Mo * dw.asDiagonal() * Mo.adjoint());
  }
  if (!any) throw EmptyLowBand("low-band probe: no nonzero mode inside the cutoff");
  const SmallRealMat sym = 0.5 * (gram.real() + gram.real().transpose());
  Eigen::SelfAdjointEigenSolver<SmallRealMat> es(sym);
  GramResult out;
  out.lambda_max = std::max(0.0, es.eigenvalues()(rows - 1));
  out.top = es.eigenvectors().col(rows - 1);
  return out;
}

}  // namespace

double predicted_exponent(int dim, double p, double q, int j) {
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  return -0.5 * dim * (iq - ip) - 0.5 * j;
}

DecayReport fit_decay(const NormSeries& series, FitWindow window, double predicted,
                      const FitOptions& options) {
  if (!(window.a > 0) || !(window.b > window.a))
    throw InvalidArgument("fit window must satisfy 0 < a < b");
  if (window.b > options.trust_end) {
    std::ostringstream msg;
    msg << "fit window [" << window.a << ", " << window.b << "] extends past the trust horizon "
        << options.trust_end;
    throw WindowOutsideTrust(msg.str());
  }
  std::vector<double> x, y;
  const double slack = 1e-12 * window.b;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.times()[i];
    if (t < window.a - slack || t > window.b + slack) continue;
    const double v = series.values()[i];
    if (!(v > 0)) {
      std::ostringstream msg;
      msg << "series '" << series.descriptor() << "' is not positive at t = " << t;
      throw NonPositiveSeries(msg.str());
    }
    x.push_back(std::log(t));
    y.push_back(std::log(v));
  }
  if (x.size() < 2) throw WindowUncovered("fewer than two samples inside the fit window");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  DecayReport rep;
  rep.label = series.descriptor();
  rep.fitted_exponent = sxy / sxx;
  rep.predicted_exponent = predicted;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (my + rep.fitted_exponent * (x[i] - mx));
    ss += e * e;
  }
  rep.residual = std::sqrt(ss / n);
  rep.tolerance = options.tolerance;
  rep.window = window;
  rep.samples = x.size();
  rep.trust_window_ok = true;
  rep.verdict = std::abs(rep.fitted_exponent - predicted) <= options.tolerance;
  return rep;
}

std::vector<double> log_spaced(double a, double b, std::size_t n) {
  if (!(a > 0) || !(b > a) || n < 2) throw InvalidArgument("log_spaced needs 0 < a < b and n >= 2");
  std::vector<double> t(n);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
  t.front() = a;
  t.back() = b;
  return t;
}

double spreading_rate(const FluidParams& p) {
  return std::max(p.alpha_star(),
                  0.5 * (p.alpha_star() + p.beta_star()) + std::sqrt(std::max(p.delta_star(), 0.0)));
}

double mass_radius_factor(int dim) {
  static constexpr double kFactor[] = {2.5758293035489, 3.0348542587702, 3.3682141752187,
                                       3.6437211935036};
  if (dim < 1 || dim > kMaxDim) throw InvalidArgument("dimension must be in [1, 4]");
  return kFactor[dim - 1];
}

double mass_radius_99(const FluidParams& params, int dim, double width, double t, bool extremal) {
  const double c = extremal ? 4.0 : 2.0;
  return mass_radius_factor(dim) * std::sqrt(width * width + c * spreading_rate(params) * t);
}

double trust_horizon(const FluidParams& params, const Grid& grid, double width, bool extremal) {
  const double c = extremal ? 4.0 : 2.0;
  const double rmax = 0.25 * grid.box_len() / mass_radius_factor(grid.dim());
  return std::max(0.0, (rmax * rmax - width * width) / (c * spreading_rate(params)));
}

std::vector<SymbolCoefficients> oracle_symbol_table(const FluidParams& params, const Grid& grid,
                                                    double t) {
  const std::size_t kmax = grid.n() / 2 - 1;
  const std::size_t entries = static_cast<std::size_t>(grid.dim()) * kmax * kmax + 1;
  const double unit_sq = grid.wavenumber_unit() * grid.wavenumber_unit();
  std::vector<SymbolCoefficients> table(entries);
  table[0].c1 = t;
  std::vector<double> xi(static_cast<std::size_t>(grid.dim()), 0.0);
  for (std::size_t m = 1; m < entries; ++m) {
    const double a = std::sqrt(static_cast<double>(m) * unit_sq);
    xi[0] = a;
    const ModeMatrix M = matexp_oracle(params, xi, t);
    SymbolCoefficients& c = table[m];
    c.c0 = M(0, 0).real();
    c.c1 = (kI * M(0, 1)).real() / a;
    c.d = M(1, 1).real();
    c.heat = grid.dim() > 1 ? M(2, 2).real() : std::exp(-params.alpha_star() * a * a * t);
  }
  return table;
}

double low_band_norm_gram(const LowBandProbe& probe, double t, const CoefficientSource& source) {
  const GramResult gr = low_band_gram(probe, t, source);
  return std::sqrt(gr.lambda_max / probe.grid.volume());
}

double low_band_norm_pipeline(const LowBandProbe& probe, double t) {
  const Grid& g = probe.grid;
  const int dim = g.dim();
  const int rows = output_rows(probe);
  const GramResult gr = low_band_gram(probe, t, symbol_table);
  const auto table = symbol_table(probe.params, g, t);

  // Extremal data K_k^* v, where K_k = phi O M B. The pipeline applies phi again.
  ComplexField f_hat(g, 1);
  const bool div = probe.form == DataForm::Divergence;
  ComplexField data_hat(g, div ? static_cast<std::size_t>(dim * dim) : static_cast<std::size_t>(dim));
  SmallVec v = SmallVec::Zero(rows);
  for (int i = 0; i < rows; ++i) v(i) = gr.top(i);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double phi = probe.cutoff(true_abs_xi(g, k));
    if (phi == 0.0 || on_nyquist(g, k)) continue;
    const auto xi = operator_wavevector(g, k);
    const SmallMat M = mode_matrix(probe.params, table[operator_index_sq(g, k)], xi, dim);
    const SmallVec w = phi * (M.topRows(rows).adjoint() * v);
    if (probe.density_data) f_hat.component(0)[k] = w(0);
    for (int j = 0; j < dim; ++j) {
      if (div)
        for (int l = 0; l < dim; ++l) data_hat.tensor(j, l)[k] = -kI * xi[l] * w(1 + j);
      else
        data_hat.component(static_cast<std::size_t>(j))[k] = w(1 + j);
    }
  }
  const double data_norm = std::sqrt(std::pow(l2_norm_spectral(f_hat), 2) +
                                     std::pow(l2_norm_spectral(data_hat), 2));
  if (data_norm == 0.0) return 0.0;

  SpectralState s(g);
  s.theta_hat = std::move(f_hat);
  s.m_hat = div ? divergence_form_momentum(data_hat) : std::move(data_hat);
  const SpectralState out = apply_semigroup(frequency_split(s, probe.cutoff).low, probe.params, t);
  const State real = to_real(out);
  const double peak = probe.momentum_output ? lp_norm(real, kInfinity) : lp_norm(real.theta, kInfinity);
  return peak / data_norm;
}

namespace {

// Per-mode weighted operator |xi|^j (1 - phi) W M W^{-1}, W = diag(sqrt(1+r), 1, ...).
SmallMat high_mode_operator(const HighBandProbe& probe, const SymbolCoefficients& c,
                            const Grid& g, std::size_t k) {
  const int dim = g.dim();
  const auto xi = operator_wavevector(g, k);
  double r = 0.0;
  for (int d = 0; d < dim; ++d) r += xi[d] * xi[d];
  SmallMat M = mode_matrix(probe.params, c, xi, dim);
  const double w = std::sqrt(1.0 + r);
  M.row(0) *= w;
  M.col(0) /= w;
  return (std::pow(std::sqrt(r), probe.j) * (1.0 - probe.cutoff(true_abs_xi(g, k)))) * M;
}

}  // namespace

HighBandValue high_band_norm_modes(const HighBandProbe& probe, double t) {
  const Grid& g = probe.grid;
  if (probe.j < 0 || probe.j > 1) throw InvalidArgument("high-band probe supports j in {0, 1}");
  const auto table = symbol_table(probe.params, g, t);
  const double unit = g.wavenumber_unit();
  std::map<std::pair<std::size_t, long>, bool> seen;
  HighBandValue best;
  for (std::size_t k = 1; k < g.size(); ++k) {
    if (on_nyquist(g, k)) continue;
    const std::size_t op = operator_index_sq(g, k);
    const long key = std::lround(std::pow(true_abs_xi(g, k) / unit, 2));
    if (!seen.emplace(std::make_pair(op, key), true).second) continue;
    const SmallMat K = high_mode_operator(probe, table[op], g, k);
    const SmallMat KK = K.adjoint() * K;
    Eigen::SelfAdjointEigenSolver<SmallMat> es(KK);
    const double s = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    if (s > best.norm) {
      best.norm = s;
      best.mode = k;
    }
  }
  return best;
}

namespace {

// Number of ordered index tuples that collapse to the multi-index a.
double multinomial(const MultiIndex& a) {
  int total = 0;
  double denom = 1.0;
  for (int v : a) {
    total += v;
    denom *= std::tgamma(v + 1.0);
  }
  return std::tgamma(total + 1.0) / denom;
}

// Sum over ordered derivative tuples, so that the norm of a plane wave is
// |xi|^order times its amplitude, matching the per-mode weight.
double hilbert_w10(const ComplexField& th_hat, const ComplexField& m_hat, int j) {
  const int dim = th_hat.grid().dim();
  double acc = 0.0;
  auto add = [&](const ComplexField& f, int order) {
    for (const auto& a : multi_indices(dim, order)) {
      ComplexField d = f;
      apply_derivative(d, a);
      acc += multinomial(a) * std::pow(lp_norm(inverse_transform_real(d), 2.0), 2);
    }
  };
  add(th_hat, j);
  add(th_hat, j + 1);
  add(m_hat, j);
  return std::sqrt(acc);
}

}  // namespace

double high_band_norm_pipeline(const HighBandProbe& probe, double t) {
  const Grid& g = probe.grid;
  const int dim = g.dim();
  const HighBandValue hv = high_band_norm_modes(probe, t);
  if (hv.norm == 0.0) return 0.0;
  const auto table = symbol_table(probe.params, g, t);
  const std::size_t k = hv.mode;
  const SmallMat K = high_mode_operator(probe, table[operator_index_sq(g, k)], g, k);
  Eigen::SelfAdjointEigenSolver<SmallMat> es(K.adjoint() * K);
  const SmallVec w = es.eigenvectors().col(dim);
  const auto xi = operator_wavevector(g, k);
  double r = 0.0;
  for (int d = 0; d < dim; ++d) r += xi[d] * xi[d];

  SpectralState s(g);
  const std::size_t kc = g.conjugate_offset(k);
  s.theta_hat.component(0)[k] = w(0) / std::sqrt(1.0 + r);
  s.theta_hat.component(0)[kc] = std::conj(w(0)) / std::sqrt(1.0 + r);
  for (int j = 0; j < dim; ++j) {
    s.m_hat.component(static_cast<std::size_t>(j))[k] = w(1 + j);
    s.m_hat.component(static_cast<std::size_t>(j))[kc] = std::conj(w(1 + j));
  }
  const double data_norm = hilbert_w10(s.theta_hat, s.m_hat, 0);
  const SpectralState out = apply_semigroup(frequency_split(s, probe.cutoff).high, probe.params, t);
  return hilbert_w10(out.theta_hat, out.m_hat, probe.j) / data_norm;
}

double heat_anchor_linf(const FluidParams& params, const Grid& grid, double t) {
  const int dim = grid.dim();
  if (dim < 2) throw InvalidArgument("heat anchor needs N >= 2 for a transverse field");
  SpectralState s(grid);
  const double delta_hat = 1.0 / grid.cell_volume();
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (on_nyquist(grid, k)) continue;
    const auto xi = operator_wavevector(grid, k);
    double r = 0.0;
    for (int d = 0; d < dim; ++d) r += xi[d] * xi[d];
    for (int j = 0; j < dim; ++j)
      s.m_hat.component(static_cast<std::size_t>(j))[k] =
          delta_hat * ((j == 0 ? 1.0 : 0.0) - xi[j] * xi[0] / r);
  }
  const State out = to_real(apply_semigroup(s, params, t));
  return lp_norm(out.m, kInfinity);
}

NormSeries sample_series(const std::string& descriptor, const std::vector<double>& times,
                         const std::function<double(double)>& fn) {
  NormSeries s(descriptor);
  for (double t : times) s.append(t, fn(t));
  return s;
}

AblationReport divergence_form_ablation(const AblationScenario& sc) {
  AblationReport rep;
  const auto times = log_spaced(sc.window.a, sc.window.b, sc.samples);
  const int dim = sc.grid.dim();
  auto run = [&](DataForm form, const char* name) {
    LowBandProbe probe{sc.params, sc.grid, sc.cutoff, form, false, false};
    return sample_series(name, times, [&](double t) {
      return sc.amplitude == 0.0 ? 0.0 : sc.amplitude * low_band_norm_gram(probe, t, sc.source);
    });
  };
  rep.divergence_series = run(DataForm::Divergence, "theta_low_linf_divergence");
  rep.generic_series = run(DataForm::Generic, "theta_low_linf_generic");
  const double predicted = predicted_exponent(dim, kInfinity, 2.0, 0);
  if (sc.amplitude == 0.0) {
    rep.skipped = true;
    rep.divergence.label = rep.divergence_series.descriptor();
    rep.generic.label = rep.generic_series.descriptor();
    rep.divergence.predicted_exponent = predicted;
    rep.generic.predicted_exponent = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  FitOptions opt;
  opt.tolerance = sc.tolerance;
  opt.trust_end = trust_horizon(sc.params, sc.grid, sc.grid.spacing(), true);
  rep.divergence = fit_decay(rep.divergence_series, sc.window, predicted, opt);
  rep.generic = fit_decay(rep.generic_series, sc.window, std::numeric_limits<double>::quiet_NaN(), opt);
  rep.gap = rep.generic.fitted_exponent - rep.divergence.fitted_exponent;
  rep.generic.verdict = rep.gap > 0.0;
  return rep;
}

}  // namespace nsk
