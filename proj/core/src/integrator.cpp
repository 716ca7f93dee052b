#include "nsk/integrator.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "nsk/errors.hpp"
#include "nsk/log.hpp"
#include "nsk/nonlinear.hpp"

namespace nsk {

namespace {

constexpr cplx kI{0.0, 1.0};

double density_extreme(const SpectralState& u, double rho, bool want_min) {
  const RealField th = inverse_transform_real(u.theta_hat);
  double v = want_min ? INFINITY : -INFINITY;
  for (double x : th.data()) v = want_min ? std::min(v, rho + x) : std::max(v, rho + x);
  return v;
}

bool admissible(const SpectralState& u, double rho) {
  const double lo = density_extreme(u, rho, true), hi = density_extreme(u, rho, false);
  return lo >= 0.25 * rho && hi <= 4.0 * rho;
}

}  // namespace

std::vector<std::string> validate_scenario(const NonlinearScenario& s) {
  std::vector<std::string> notes;
  const double N = s.grid.dim();
  const auto& e = s.exponents;
  auto note = [&](const std::string& what) { notes.push_back("outside theorem scope: " + what); };
  if (N < 3 || N > 7) note("dimension must satisfy 3 <= N <= 7");
  if (!(e.p > 2 && std::isfinite(e.p))) note("2 < p < inf");
  if (!(e.q1 < N && N < e.q2)) note("q1 < N < q2");
  if (!(e.q1 > 2 && e.q1 <= 4)) note("2 < q1 <= 4");
  if (!(std::abs(1.0 / e.q1 - (1.0 / e.q2 + 1.0 / N)) <= 1e-12)) note("1/q1 = 1/q2 + 1/N");
  if (!(2.0 / e.p + N / e.q2 < 1)) note("2/p + N/q2 < 1");
  if (!(1.0 / e.p < e.tau && e.tau < N / e.q2 + 1.0 / e.p)) note("1/p < tau < N/q2 + 1/p");
  return notes;
}

State initial_data(const NonlinearScenario& s) {
  const Grid& g = s.grid;
  const int dim = g.dim();
  const double rho = s.params.rho_star();
  const auto c = box_center(g);
  const double L = g.box_len();
  State st(g);
  st.theta = gaussian_bump(g, c, s.density_width * L, s.amplitude * rho);
  if (s.amplitude == 0.0) return st;

  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> wave(-3, 3);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  const RealField env = gaussian_bump(g, c, s.tensor_width * L, 1.0);
  RealField M = tensor_field(g);
  const double unit = g.wavenumber_unit();
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) {
      auto comp = M.tensor(j, k);
      for (int term = 0; term < 4; ++term) {
        std::array<double, kMaxDim> kv{};
        for (int d = 0; d < dim; ++d) kv[d] = unit * wave(rng);
        const double a = normal(rng), ph = phase(rng);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const auto x = g.position(i);
          double arg = ph;
          for (int d = 0; d < dim; ++d) arg += kv[d] * x[d];
          comp[i] += a * std::cos(arg) * env.data()[i];
        }
      }
    }
  RealField m = divergence_form_momentum(M);
  const double peak = lp_norm(m, kInfinity);
  if (peak > 0.0) {
    const double scale = s.amplitude * rho / peak;
    for (double& v : m.data()) v *= scale;
  }
  st.m = std::move(m);
  return st;
}

Etdrk2::Etdrk2(const FluidParams& params, const Grid& grid, double dt, bool linear_only)
    : params_(params), grid_(grid), dt_(dt), linear_only_(linear_only) {
  if (!(dt > 0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
  propagator_ = symbol_table(params, grid, dt);
  blocks_.resize(propagator_.size());
  const double unit_sq = grid.wavenumber_unit() * grid.wavenumber_unit();
  const double ab = params.alpha_star() + params.beta_star();
  const double kr = params.kappa_star() * params.rho_star();
  for (std::size_t m = 0; m < blocks_.size(); ++m) {
    const double r = static_cast<double>(m) * unit_sq;
    const double a = std::sqrt(r);
    // exp of [[hB, I, 0], [0, 0, I], [0, 0, 0]] carries phi_1(hB), phi_2(hB) in its first block row.
    Eigen::Matrix<double, 6, 6> Z = Eigen::Matrix<double, 6, 6>::Zero();
    Z(0, 1) = -a * dt;
    Z(1, 0) = kr * r * a * dt;
    Z(1, 1) = -ab * r * dt;
    Z.block<2, 2>(0, 2).setIdentity();
    Z.block<2, 2>(2, 4).setIdentity();
    const Eigen::Matrix<double, 6, 6> E = Z.exp();
    Block& b = blocks_[m];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        b.phi1[2 * i + j] = E(i, 2 + j);
        b.phi2[2 * i + j] = E(i, 4 + j);
      }
    Eigen::Matrix3d z = Eigen::Matrix3d::Zero();
    z(0, 0) = -params.alpha_star() * r * dt;
    z(0, 1) = 1.0;
    z(1, 2) = 1.0;
    const Eigen::Matrix3d ez = z.exp();
    b.phi1_t = ez(0, 1);
    b.phi2_t = ez(0, 2);
  }
}

SpectralState Etdrk2::add_phi(const SpectralState& base, const ComplexField& g_hat, bool second) const {
  const int dim = grid_.dim();
  SpectralState out = base;
  auto th = out.theta_hat.component(0);
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    const Block& b = blocks_[operator_index_sq(grid_, k)];
    const auto& phi = second ? b.phi2 : b.phi1;
    const double pt = second ? b.phi2_t : b.phi1_t;
    const auto xi = operator_wavevector(grid_, k);
    double r = 0.0;
    for (int d = 0; d < dim; ++d) r += xi[d] * xi[d];
    if (r == 0.0) {
      for (int d = 0; d < dim; ++d) out.m_hat.component(d)[k] += dt_ * pt * g_hat.component(d)[k];
      continue;
    }
    const double a = std::sqrt(r);
    cplx p{};
    for (int d = 0; d < dim; ++d) p += xi[d] / a * g_hat.component(d)[k];
    // Longitudinal pair (theta_hat, i omega.m_hat) driven by (0, i p).
    th[k] += dt_ * phi[1] * kI * p;
    const cplx longit = phi[3] * p;
    for (int d = 0; d < dim; ++d) {
      const double om = xi[d] / a;
      out.m_hat.component(d)[k] += dt_ * (om * longit + pt * (g_hat.component(d)[k] - om * p));
    }
  }
  return out;
}

SpectralState Etdrk2::step(const SpectralState& u) const {
  SpectralState lin = apply_coefficients(u, params_, propagator_);
  if (linear_only_) return lin;
  const ComplexField nu = nonlinearity_g_hat(u, params_);
  const SpectralState a = add_phi(lin, nu, false);
  ComplexField diff = nonlinearity_g_hat(a, params_);
  for (std::size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= nu.data()[i];
  return add_phi(a, diff, true);
}

SpectralState time_derivative(const SpectralState& u, const ComplexField& g_hat,
                              const FluidParams& params) {
  const Grid& g = u.grid();
  const int dim = g.dim();
  const double al = params.alpha_star(), be = params.beta_star();
  const double kr = params.kappa_star() * params.rho_star();
  SpectralState du(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto xi = operator_wavevector(g, k);
    double r = 0.0;
    cplx xm{};
    for (int d = 0; d < dim; ++d) {
      r += xi[d] * xi[d];
      xm += xi[d] * u.m_hat.component(d)[k];
    }
    const cplx th = u.theta_hat.component(0)[k];
    du.theta_hat.component(0)[k] = -kI * xm;
    for (int d = 0; d < dim; ++d)
      du.m_hat.component(d)[k] = -al * r * u.m_hat.component(d)[k] - be * xi[d] * xm -
                                 kI * kr * r * xi[d] * th + g_hat.component(d)[k];
  }
  return du;
}

SpectralState step(const SpectralState& u, const FluidParams& params, double dt) {
  SpectralState next = Etdrk2(params, u.grid(), dt).step(u);
  if (!admissible(next, params.rho_star()))
    throw StepRejected("step leaves the range rho*/4 <= rho* + theta <= 4 rho*");
  return next;
}

SpectralState integrate(const SpectralState& u0, const FluidParams& params, double T, double dt,
                        bool linear_only) {
  const Etdrk2 integ(params, u0.grid(), dt, linear_only);
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  SpectralState u = u0;
  for (std::size_t n = 0; n < steps; ++n) u = integ.step(u);
  return u;
}

RunResult run(const NonlinearScenario& s) {
  const Grid& g = s.grid;
  const double rho = s.params.rho_star();
  RunResult res(g);
  for (const auto& note : validate_scenario(s)) {
    log_warning(note);
    res.events.push_back({0.0, "scope", note});
  }
  if (!(s.horizon > 0) || !(s.dt > 0)) throw InvalidArgument("horizon and dt must be positive");
  if (s.sample_every == 0) throw InvalidArgument("sample_every must be at least 1");
  const auto steps = static_cast<std::size_t>(std::llround(s.horizon / s.dt));
  if (steps == 0) throw InvalidArgument("horizon shorter than one step");

  SpectralState u = to_spectral(initial_data(s));
  const Etdrk2 integ(s.params, g, s.dt, s.linear_only);
  const cplx mean0 = u.theta_hat.component(0)[0];
  const double n_pts = static_cast<double>(g.size());
  const AggregateExponents agg{g.dim(), s.exponents.p, s.exponents.q1, s.exponents.q2, s.exponents.tau};

  auto sample = [&](double t) {
    ComplexField g_hat = s.linear_only ? ComplexField(g, static_cast<std::size_t>(g.dim()))
                                       : nonlinearity_g_hat(u, s.params);
    const SpectralState du = time_derivative(u, g_hat, s.params);
    for (const auto& [key, value] : constituent_values(u, du, s.exponents.q1, s.exponents.q2)) {
      auto it = res.bundle.try_emplace(key, NormSeries(key)).first;
      it->second.append(t, value);
    }
    res.density_min.append(t, density_extreme(u, rho, true));
    res.density_max.append(t, density_extreme(u, rho, false));
    res.mean_theta.append(t, std::abs(u.theta_hat.component(0)[0].real()) / n_pts);
    res.aggregate.append(t, aggregate_N(res.bundle, agg, t));
  };

  std::size_t n = 0;
  double t = 0.0;
  try {
    sample(0.0);
    for (n = 1; n <= steps; ++n) {
      SpectralState next = integ.step(u);
      t = static_cast<double>(n) * s.dt;
      if (!admissible(next, rho)) {
        std::ostringstream msg;
        msg << "step " << n << " leaves the range rho*/4 <= rho* + theta <= 4 rho*";
        throw StepRejected(msg.str());
      }
      u = std::move(next);
      res.steps = n;
      res.final_time = t;
      res.max_symmetry_defect = std::max(res.max_symmetry_defect, conjugate_symmetry_defect(u));
      const double drift = std::abs(u.theta_hat.component(0)[0] - mean0) /
                           std::max(std::abs(mean0), 1e-300);
      res.mean_theta_drift = std::max(res.mean_theta_drift, mean0 == 0.0 && drift == 0.0 ? 0.0 : drift);
      if (n % s.sample_every == 0 || n == steps) sample(t);
    }
    res.completed = true;
  } catch (const Error& e) {
    res.error_kind = e.kind();
    res.error_message = e.what();
    res.events.push_back({t, e.kind(), e.what()});
  }
  res.final_state = std::move(u);
  return res;
}

}  // namespace nsk
