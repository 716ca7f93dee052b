#include "nsk/nonlinear.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "nsk/errors.hpp"
#include "nsk/fft.hpp"
#include "nsk/spectral.hpp"

namespace nsk {

namespace {

constexpr cplx kI{0.0, 1.0};

// 8-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 8> kGlNodes = {
    0.019855071751231856, 0.10166676129318664, 0.2372337950418355, 0.4082826787521751,
    0.5917173212478249,   0.7627662049581645,  0.8983332387068134, 0.9801449282487681};
constexpr std::array<double, 8> kGlWeights = {
    0.05061426814518813, 0.11119051722668724, 0.15685332293894363, 0.18134189168918100,
    0.18134189168918100, 0.15685332293894363, 0.11119051722668724, 0.05061426814518813};

ComplexField truncated(const RealField& f) {
  ComplexField c = forward_transform(f);
  dealias(c);
  return c;
}

RealField smooth(const RealField& f) { return inverse_transform_real(truncated(f)); }

void check_range(const RealField& theta, double rho) {
  for (double th : theta.data()) {
    const double r = rho + th;
    if (!(r >= 0.25 * rho && r <= 4.0 * rho)) {
      std::ostringstream msg;
      msg << "density " << r << " outside [rho*/4, 4 rho*] = [" << 0.25 * rho << ", " << 4.0 * rho << "]";
      throw RangeViolation(msg.str());
    }
  }
}

// Derivative d_axis of every component of f_hat, back in real space.
RealField derivative(const ComplexField& f_hat, int axis) {
  MultiIndex a{};
  a[axis] = 1;
  ComplexField d = f_hat;
  apply_derivative(d, a);
  return inverse_transform_real(d);
}

RealField viscous_from_hat(const ComplexField& u_hat, const FluidParams& p) {
  const Grid& g = u_hat.grid();
  const int dim = g.dim();
  RealField S = tensor_field(g);
  // du[j] holds d_j of every component of u.
  std::vector<RealField> du;
  for (int j = 0; j < dim; ++j) du.push_back(derivative(u_hat, j));
  const double mu = p.mu_star(), lam = p.nu_star() - p.mu_star();
  for (std::size_t i = 0; i < g.size(); ++i) {
    double div = 0.0;
    for (int j = 0; j < dim; ++j) div += du[j].component(j)[i];
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        double v = mu * (du[j].component(k)[i] + du[k].component(j)[i]);
        if (j == k) v += lam * div;
        S.tensor(j, k)[i] = v;
      }
  }
  return S;
}

}  // namespace

void dealias(ComplexField& f_hat) {
  const Grid& g = f_hat.grid();
  const long cut = static_cast<long>(g.n()) / 3;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto idx = g.unflatten(k);
    bool drop = false;
    for (int d = 0; d < g.dim() && !drop; ++d) drop = std::labs(g.signed_index(idx[d])) > cut;
    if (drop)
      for (std::size_t c = 0; c < f_hat.components(); ++c) f_hat.component(c)[k] = 0.0;
  }
}

RealField viscous_tensor(const RealField& u, const FluidParams& params) {
  if (u.components() != static_cast<std::size_t>(u.grid().dim()))
    throw InvalidArgument("viscous_tensor expects a vector field");
  return viscous_from_hat(forward_transform(u), params);
}

RealField korteweg_tensor(const RealField& rho, const FluidParams& params) {
  const Grid& g = rho.grid();
  const int dim = g.dim();
  const ComplexField rh = forward_transform(rho);
  std::vector<RealField> grad;
  for (int j = 0; j < dim; ++j) grad.push_back(derivative(rh, j));
  RealField sq = scalar_field(g);
  for (std::size_t i = 0; i < g.size(); ++i) sq.data()[i] = rho.data()[i] * rho.data()[i];
  ComplexField sq_hat = forward_transform(sq);
  RealField lap_sq = scalar_field(g);
  for (int j = 0; j < dim; ++j) {
    MultiIndex a{};
    a[j] = 2;
    ComplexField d = sq_hat;
    apply_derivative(d, a);
    const RealField dj = inverse_transform_real(d);
    for (std::size_t i = 0; i < g.size(); ++i) lap_sq.data()[i] += dj.data()[i];
  }
  const double kappa = params.kappa_star();
  RealField K = tensor_field(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double g2 = 0.0;
    for (int j = 0; j < dim; ++j) g2 += grad[j].data()[i] * grad[j].data()[i];
    const double iso = 0.5 * kappa * (lap_sq.data()[i] - g2);
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        K.tensor(j, k)[i] = (j == k ? iso : 0.0) - kappa * grad[j].data()[i] * grad[k].data()[i];
  }
  return K;
}

RealField pressure_remainder(const RealField& theta, const FluidParams& params) {
  const PressureLaw& law = params.pressure();
  const double rho = params.rho_star();
  RealField out = scalar_field(theta.grid());
  for (std::size_t i = 0; i < theta.points(); ++i) {
    const double th = theta.data()[i];
    if (!law.contains(rho + th)) {
      std::ostringstream msg;
      msg << "density " << rho + th << " outside the pressure law's validity interval ("
          << law.rho_min << ", " << law.rho_max << ")";
      throw ValidityExceeded(msg.str());
    }
    if (th == 0.0) continue;
    double acc = 0.0;
    for (std::size_t q = 0; q < kGlNodes.size(); ++q)
      acc += kGlWeights[q] * law.d2(rho + kGlNodes[q] * th) * (1.0 - kGlNodes[q]);
    out.data()[i] = acc * th * th;
  }
  return out;
}

ComplexField bracket_tensor_hat(const SpectralState& u, const FluidParams& params) {
  const Grid& g = u.grid();
  const int dim = g.dim();
  const double rho = params.rho_star();

  ComplexField th_hat = u.theta_hat, m_hat = u.m_hat;
  dealias(th_hat);
  dealias(m_hat);
  const RealField theta = inverse_transform_real(th_hat);
  const RealField m = inverse_transform_real(m_hat);
  check_range(theta, rho);

  // w = 1/(rho*+theta) - 1/rho*, then v = w m.
  RealField w = scalar_field(g);
  for (std::size_t i = 0; i < g.size(); ++i) w.data()[i] = 1.0 / (rho + theta.data()[i]) - 1.0 / rho;
  w = smooth(w);
  RealField v = vector_field(g);
  for (int j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < g.size(); ++i) v.component(j)[i] = w.data()[i] * m.component(j)[i];
  const RealField S = viscous_from_hat(truncated(v), params);

  RealField mm = tensor_field(g);
  for (int j = 0; j < dim; ++j)
    for (int k = j; k < dim; ++k)
      for (std::size_t i = 0; i < g.size(); ++i) mm.tensor(j, k)[i] = m.component(j)[i] * m.component(k)[i];
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < j; ++k) {
      auto dst = mm.tensor(j, k);
      auto src = mm.tensor(k, j);
      std::copy(src.begin(), src.end(), dst.begin());
    }
  mm = smooth(mm);

  const RealField K = korteweg_tensor(theta, params);
  const RealField Pi = pressure_remainder(theta, params);

  RealField H = tensor_field(g);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) {
      auto h = H.tensor(j, k);
      auto a = mm.tensor(j, k);
      auto s = S.tensor(j, k);
      auto kk = K.tensor(j, k);
      for (std::size_t i = 0; i < g.size(); ++i) {
        h[i] = a[i] * (w.data()[i] + 1.0 / rho) - s[i] - kk[i];
        if (j == k) h[i] += Pi.data()[i];
      }
    }
  return truncated(H);
}

RealField bracket_tensor(const RealField& theta, const RealField& m, const FluidParams& params) {
  const State s(theta, m);
  return inverse_transform_real(bracket_tensor_hat(to_spectral(s), params));
}

ComplexField nonlinearity_g_hat(const SpectralState& u, const FluidParams& params) {
  ComplexField g_hat = divergence_form_momentum(bracket_tensor_hat(u, params));
  for (auto& v : g_hat.data()) v = -v;
  return g_hat;
}

RealField nonlinearity_g(const RealField& theta, const RealField& m, const FluidParams& params) {
  const State s(theta, m);
  return inverse_transform_real(nonlinearity_g_hat(to_spectral(s), params));
}

}  // namespace nsk
