#include <cmath>
#include <set>
#include <string>

#include "doctest.h"
#include "gen.hpp"
#include "nsk/errors.hpp"
#include "nsk/field.hpp"
#include "nsk/grid.hpp"
#include "nsk/log.hpp"
#include "nsk/params.hpp"
#include "nsk/spectral.hpp"

using namespace nsk;

TEST_CASE("make_params accepts the unit fluid") {
  const auto p = make_params(1, 1, 1, 1, critical_quadratic(1, 1));
  CHECK(p.alpha_star() == 1.0);
  CHECK(p.beta_star() == 1.0);
  CHECK(p.delta_star() == 0.0);
}

TEST_CASE("make_params names the failed inequality") {
  auto message = [](auto&& fn) {
    try {
      fn();
    } catch (const ConstraintViolation& e) {
      return std::string(e.what());
    }
    return std::string("no throw");
  };
  CHECK(message([] { make_params(0, 1, 1, 1, critical_quadratic(1, 1)); }) == "mu_star > 0");
  CHECK(message([] { make_params(1, -1, 1, 1, critical_quadratic(1, 1)); }) == "mu_star + nu_star > 0");
  CHECK(message([] { make_params(1, 1, 0, 1, critical_quadratic(1, 1)); }) == "kappa_star > 0");
  CHECK(message([] { make_params(1, 1, 1, -2, critical_quadratic(1, 1)); }) == "rho_star > 0");
}

TEST_CASE("linear pressure is not critical") {
  auto lin = make_pressure_law(
      "linear", [](double r) { return r; }, [](double) { return 1.0; }, [](double) { return 0.0; },
      0.1, 10.0);
  CHECK_THROWS_AS(make_params(1, 1, 1, 1, lin), CriticalityViolation);
}

TEST_CASE("pressure law with a wrong derivative is rejected") {
  CHECK_THROWS_AS(make_pressure_law(
                      "bad", [](double r) { return r * r * r; },
                      [](double r) { return 2.0 * r * r; }, [](double r) { return 6.0 * r; }, 0.5,
                      2.0),
                  ConstraintViolation);
}

TEST_CASE("property: every constructed FluidParams satisfies the constraints") {
  test::Gen g(0x5eed01);
  int built = 0;
  for (int i = 0; i < 2000; ++i) {
    const double mu = g.uniform(-1, 3), nu = g.uniform(-3, 3), kappa = g.uniform(-1, 3),
                 rho = g.uniform(-0.5, 3);
    // Perturb the reference of the pressure law half the time to exercise criticality.
    const double shift = g.integer(0, 1) ? 0.0 : g.uniform(-0.1, 0.1);
    try {
      const auto p = make_params(mu, nu, kappa, rho, critical_quadratic(1.0, rho + shift > 0 ? rho + shift : 1.0));
      ++built;
      CHECK(p.mu_star() > 0);
      CHECK(p.mu_star() + p.nu_star() > 0);
      CHECK(p.kappa_star() > 0);
      CHECK(p.rho_star() > 0);
      const double p1 = p.pressure().d1(p.rho_star());
      const double p2 = p.pressure().d2(p.rho_star());
      CHECK(std::abs(p1) <= kCriticalityTol * std::max(1.0, std::abs(p2)));
      CHECK(std::isfinite(p.alpha_star()));
      CHECK(std::isfinite(p.beta_star()));
    } catch (const ConstraintViolation&) {
    } catch (const CriticalityViolation&) {
    }
  }
  CHECK(built > 100);
}

TEST_CASE("property: pressure derivatives converge at second order") {
  test::Gen g(0x5eed02);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c = {g.uniform(-1, 1), 0.0, g.uniform(0.1, 2), g.uniform(-1, 1), g.uniform(-1, 1)};
    const auto law = polynomial_pressure(c, 1.0, 0.5, 2.0);
    double prev = pressure_fd_defect(law, 1e-2);
    for (double h : {5e-3, 2.5e-3}) {
      const double e = pressure_fd_defect(law, h);
      if (prev > 1e-10) {
        CHECK(e <= 0.3 * prev);
      }
      prev = e;
    }
    const auto p = make_params(1, 0, 1, 1, law);
    CHECK(p.pressure().d2(1.0) == doctest::Approx(2 * c[2]));
  }
}

TEST_CASE("critical quadratic is exactly critical") {
  for (double rho : {0.3, 1.0, 7.5}) CHECK(critical_quadratic(2.5, rho).d1(rho) == 0.0);
}

TEST_CASE("grid index and wavevector map") {
  const Grid g(2, 8, 4.0);
  CHECK(g.size() == 64);
  CHECK(g.spacing() == 0.5);
  CHECK(g.signed_index(0) == 0);
  CHECK(g.signed_index(3) == 3);
  CHECK(g.signed_index(4) == -4);
  CHECK(g.signed_index(7) == -1);
  for (std::size_t i = 0; i < 8; ++i) CHECK(g.axis_index(g.signed_index(i)) == i);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(g.flatten(g.unflatten(k)) == k);
    CHECK(g.conjugate_offset(g.conjugate_offset(k)) == k);
  }
  const auto xi = g.wavevector(g.flatten({1, 7, 0, 0}));
  CHECK(xi[0] == doctest::Approx(2 * M_PI / 4.0));
  CHECK(xi[1] == doctest::Approx(-2 * M_PI / 4.0));
  CHECK_THROWS_AS(Grid(3, 12, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(5, 8, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid(1, 8, 0.0), InvalidArgument);
}

TEST_CASE("grid wavevector map is a bijection") {
  const Grid g(3, 8, 2.0);
  std::set<std::array<long, 3>> seen;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto xi = g.wavevector(k);
    std::array<long, 3> key{};
    for (int d = 0; d < 3; ++d) key[d] = std::lround(xi[d] / g.wavenumber_unit());
    seen.insert(key);
  }
  CHECK(seen.size() == g.size());
}

TEST_CASE("gaussian_bump examples") {
  const Grid g(3, 32, 10.0);
  const auto c = box_center(g);
  const auto zero = gaussian_bump(g, c, 1.0, 0.0);
  for (double v : zero.data()) CHECK(v == 0.0);
  const auto f = gaussian_bump(g, c, 1.0, 2.5);
  const std::size_t mid = g.flatten({16, 16, 16, 0});
  CHECK(f.data()[mid] == doctest::Approx(2.5).epsilon(1e-14));
  double mx = 0;
  for (double v : f.data()) mx = std::max(mx, std::abs(v));
  CHECK(std::abs(mx - 2.5) <= 1e-12);
}

TEST_CASE("gaussian_bump warns outside (h, L)") {
  std::vector<std::string> seen;
  set_warning_sink([&](const std::string& m) { seen.push_back(m); });
  const Grid g(2, 16, 1.0);
  gaussian_bump(g, box_center(g), 0.01, 1.0);
  gaussian_bump(g, box_center(g), 0.9, 1.0);
  gaussian_bump(g, box_center(g), 0.15, 1.0);
  set_warning_sink(nullptr);
  CHECK(seen.size() == 2);
}

TEST_CASE("state admissibility and finiteness") {
  const Grid g(1, 8, 1.0);
  State s(g);
  CHECK(s.all_finite());
  CHECK(s.admissible(1.0));
  s.theta.data()[3] = 3.5;
  CHECK_FALSE(s.admissible(1.0));
  s.theta.data()[3] = -0.7;
  CHECK(s.admissible(1.0));
  s.theta.data()[3] = -0.76;
  CHECK_FALSE(s.admissible(1.0));
  s.m.data()[0] = NAN;
  CHECK_FALSE(s.all_finite());
}

TEST_CASE("property: state round trip through spectral space") {
  test::Gen gen(0x5eed03);
  for (int dim = 1; dim <= 3; ++dim) {
    const Grid g(dim, dim == 3 ? 16 : 32, gen.uniform(1, 10));
    State s(g);
    // Smooth random field: a handful of low modes with random amplitudes and phases.
    for (std::size_t c = 0; c < 1 + static_cast<std::size_t>(dim); ++c) {
      auto f = c == 0 ? s.theta.component(0) : s.m.component(c - 1);
      for (int term = 0; term < 6; ++term) {
        std::array<double, kMaxDim> k{};
        for (int d = 0; d < dim; ++d) k[d] = gen.integer(-4, 4) * g.wavenumber_unit();
        const double a = gen.normal(), ph = gen.uniform(0, 2 * M_PI);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const auto x = g.position(i);
          double arg = ph;
          for (int d = 0; d < dim; ++d) arg += k[d] * x[d];
          f[i] += a * std::cos(arg);
        }
      }
    }
    const SpectralState sp = to_spectral(s);
    CHECK(conjugate_symmetry_defect(sp) < 1e-13);
    const State back = to_real(sp);
    double err = 0, scale = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      err = std::max(err, std::abs(back.theta.data()[i] - s.theta.data()[i]));
      scale = std::max(scale, std::abs(s.theta.data()[i]));
    }
    for (std::size_t i = 0; i < s.m.data().size(); ++i) {
      err = std::max(err, std::abs(back.m.data()[i] - s.m.data()[i]));
      scale = std::max(scale, std::abs(s.m.data()[i]));
    }
    CHECK(err <= 1e-12 * scale);
  }
}
