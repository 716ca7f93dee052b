#include "nsk/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "nsk/errors.hpp"
#include "nsk/spectral.hpp"

namespace nsk {

namespace {

// sum |v|^q h^N, then the 1/q power; |v| is the Euclidean length across `parts`.
double lp_of_parts(const std::vector<std::span<const double>>& parts, const Grid& g, double q) {
  if (!(q >= 1)) throw InvalidArgument("lp_norm needs q in [1, inf]");
  const std::size_t n = g.size();
  if (std::isinf(q)) {
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (const auto& p : parts) s += p[i] * p[i];
      mx = std::max(mx, s);
    }
    return std::sqrt(mx);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (const auto& p : parts) s += p[i] * p[i];
    acc += q == 2.0 ? s : std::pow(s, 0.5 * q);
  }
  return std::pow(acc * g.cell_volume(), 1.0 / q);
}

std::vector<std::span<const double>> parts_of(const RealField& f) {
  std::vector<std::span<const double>> parts;
  for (std::size_t c = 0; c < f.components(); ++c) parts.push_back(f.component(c));
  return parts;
}

std::string format_q(double q) {
  if (std::isinf(q)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", q);
  return buf;
}

void require_covered(const NormSeries& s, double a, double t) {
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  if (s.empty() || s.times().front() > a + slack || s.times().back() < t - slack) {
    std::ostringstream msg;
    msg << "series '" << s.descriptor() << "' does not cover [" << a << ", " << t << "]";
    throw WindowUncovered(msg.str());
  }
}

}  // namespace

double lp_norm(const RealField& f, double q) { return lp_of_parts(parts_of(f), f.grid(), q); }

double lp_norm(const State& s, double q) {
  auto parts = parts_of(s.theta);
  for (std::size_t c = 0; c < s.m.components(); ++c) parts.push_back(s.m.component(c));
  return lp_of_parts(parts, s.grid(), q);
}

double l2_norm_spectral(const ComplexField& c) {
  const Grid& g = c.grid();
  double acc = 0.0;
  for (const cplx& v : c.data()) acc += std::norm(v);
  const double n = static_cast<double>(g.size());
  return std::sqrt(acc * g.volume()) / n;
}

double sobolev_norm(const RealField& f, int k, double q) {
  if (k < 0 || k > kMaxDerivativeOrder)
    throw DerivativeOrderExceeded("sobolev_norm order must be in [0, 3]");
  double total = lp_norm(f, q);
  if (k == 0) return total;
  const ComplexField fh = forward_transform(f);
  for (int order = 1; order <= k; ++order)
    for (const auto& a : multi_indices(f.grid().dim(), order)) {
      ComplexField d = fh;
      apply_derivative(d, a);
      total += lp_norm(inverse_transform_real(d), q);
    }
  return total;
}

void NormSeries::append(double t, double value) {
  if (!std::isfinite(t) || (!times_.empty() && !(t > times_.back())))
    throw InvalidArgument("NormSeries times must be strictly increasing");
  if (!(value >= 0)) throw InvalidArgument("NormSeries values must be non-negative");
  times_.push_back(t);
  values_.push_back(value);
}

double weighted_sup(const NormSeries& series, double ell, double a, double t) {
  require_covered(series, a, t);
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  double best = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double s = series.times()[i];
    if (s < a - slack || s > t + slack) continue;
    best = std::max(best, std::pow(1.0 + s, ell) * series.values()[i]);
  }
  return best;
}

double weighted_lp_in_time(const NormSeries& series, double ell, double p, double t) {
  if (!(p >= 1) || std::isinf(p)) throw InvalidArgument("time exponent p must be finite and >= 1");
  require_covered(series, 0.0, t);
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  double acc = 0.0;
  double prev_s = 0.0, prev_f = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double s = series.times()[i];
    if (s > t + slack) break;
    const double f = std::pow(std::pow(1.0 + s, ell) * series.values()[i], p);
    if (!first) acc += 0.5 * (s - prev_s) * (f + prev_f);
    prev_s = s;
    prev_f = f;
    first = false;
  }
  return std::pow(acc, 1.0 / p);
}

std::string sup_key(int j, double q) { return "sup_j" + std::to_string(j) + "_q" + format_q(q); }
std::string strong_key(double q) { return "W32_q" + format_q(q); }
std::string time_deriv_key(double q) { return "dtW10_q" + format_q(q); }

std::vector<std::string> constituent_keys(double q1, double q2) {
  std::vector<std::string> keys;
  for (int j = 0; j <= 1; ++j)
    for (double q : {kInfinity, q1, q2}) keys.push_back(sup_key(j, q));
  for (double q : {q1, q2}) {
    keys.push_back(strong_key(q));
    keys.push_back(time_deriv_key(q));
  }
  return keys;
}

double AggregateExponents::ell(int i) const {
  const double N = dim;
  return i == 1 ? N / (2.0 * q1) - tau : N / (2.0 * q2) + 1.0 - tau;
}

double aggregate_N(const NormBundle& bundle, const AggregateExponents& e, double t) {
  std::vector<std::string> missing;
  for (const auto& k : constituent_keys(e.q1, e.q2))
    if (!bundle.count(k)) missing.push_back(k);
  if (!missing.empty()) {
    std::string msg = "aggregate norm is missing:";
    for (const auto& k : missing) msg += " " + k;
    throw MissingConstituent(msg);
  }
  // Each distinct constituent enters once: the sup terms carry j, the
  // time-integral terms carry i.
  const double N = e.dim;
  double total = 0.0;
  for (int j = 0; j <= 1; ++j) {
    total += weighted_sup(bundle.at(sup_key(j, kInfinity)), N / e.q1 + 0.5 * j, 0.0, t);
    total += weighted_sup(bundle.at(sup_key(j, e.q1)), N / (2.0 * e.q1) + 0.5 * j, 0.0, t);
    total += weighted_sup(bundle.at(sup_key(j, e.q2)), N / (2.0 * e.q2) + 1.0 + 0.5 * j, 0.0, t);
  }
  for (int i = 1; i <= 2; ++i) {
    const double qi = i == 1 ? e.q1 : e.q2;
    total += weighted_lp_in_time(bundle.at(strong_key(qi)), e.ell(i), e.p, t);
    total += weighted_lp_in_time(bundle.at(time_deriv_key(qi)), e.ell(i), e.p, t);
  }
  return total;
}

namespace {

// All derivatives d^alpha f, |alpha| <= k, in real space, grouped by order.
std::vector<std::vector<RealField>> derivative_ladder(const ComplexField& fh, int k) {
  std::vector<std::vector<RealField>> out(static_cast<std::size_t>(k) + 1);
  out[0].push_back(inverse_transform_real(fh));
  for (int order = 1; order <= k; ++order)
    for (const auto& a : multi_indices(fh.grid().dim(), order)) {
      ComplexField d = fh;
      apply_derivative(d, a);
      out[static_cast<std::size_t>(order)].push_back(inverse_transform_real(d));
    }
  return out;
}

// Lq norm of the pointwise Euclidean length of all fields in `fs`.
double joint_lp(const std::vector<RealField>& fs, double q) {
  std::vector<std::span<const double>> parts;
  for (const auto& f : fs)
    for (std::size_t c = 0; c < f.components(); ++c) parts.push_back(f.component(c));
  return lp_of_parts(parts, fs.front().grid(), q);
}

double ladder_norm(const std::vector<std::vector<RealField>>& lad, int k, double q) {
  double s = 0.0;
  for (int order = 0; order <= k; ++order)
    for (const auto& f : lad[static_cast<std::size_t>(order)]) s += lp_norm(f, q);
  return s;
}

}  // namespace

std::map<std::string, double> constituent_values(const SpectralState& u, const SpectralState& du,
                                                 double q1, double q2) {
  const auto th = derivative_ladder(u.theta_hat, 3);
  const auto m = derivative_ladder(u.m_hat, 2);
  const auto dth = derivative_ladder(du.theta_hat, 1);
  const auto dm = derivative_ladder(du.m_hat, 0);
  std::map<std::string, double> out;
  for (double q : {kInfinity, q1, q2}) {
    out[sup_key(0, q)] = lp_norm(th[0][0], q) + lp_norm(m[0][0], q);
    out[sup_key(1, q)] = joint_lp(th[1], q) + joint_lp(m[1], q);
  }
  for (double q : {q1, q2}) {
    out[strong_key(q)] = ladder_norm(th, 3, q) + ladder_norm(m, 2, q);
    out[time_deriv_key(q)] = ladder_norm(dth, 1, q) + ladder_norm(dm, 0, q);
  }
  return out;
}

}  // namespace nsk
