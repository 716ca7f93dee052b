#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gen.hpp"
#include "nsk/errors.hpp"
#include "nsk/fft.hpp"
#include "nsk/nonlinear.hpp"
#include "nsk/norms.hpp"
#include "nsk/spectral.hpp"

using namespace nsk;
using std::numbers::pi;

namespace {

FluidParams params_with(double mu, double nu, double kappa, double rho) {
  return make_params(mu, nu, kappa, rho, critical_quadratic(1.3, rho));
}

double max_abs(std::span<const double> v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Real field built from random Fourier modes with |k'| <= kmax in every axis.
RealField band_limited(test::Gen& g, const Grid& grid, std::size_t ncomp, int kmax, double amp) {
  RealField f(grid, ncomp);
  const double L = grid.box_len();
  for (std::size_t c = 0; c < ncomp; ++c)
    for (int mode = 0; mode < 4; ++mode) {
      std::array<int, kMaxDim> k{};
      for (int d = 0; d < grid.dim(); ++d) k[d] = g.integer(-kmax, kmax);
      const double a = amp * g.uniform(-1, 1), phase = g.uniform(0, 2 * pi);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto x = grid.position(i);
        double arg = phase;
        for (int d = 0; d < grid.dim(); ++d) arg += 2 * pi * k[d] * x[d] / L;
        f.component(c)[i] += a * std::cos(arg);
      }
    }
  return f;
}

// Fourth-order centred difference of component `c` along axis `axis`.
double fd4(const RealField& f, std::size_t c, std::size_t flat, int axis) {
  const Grid& g = f.grid();
  auto idx = g.unflatten(flat);
  auto at = [&](long shift) {
    auto j = idx;
    j[axis] = g.axis_index(g.signed_index(idx[axis]) + shift);
    return f.component(c)[g.flatten(j)];
  };
  return (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * g.spacing());
}

}  // namespace

TEST_CASE("dealias keeps the inner two thirds") {
  const Grid grid(2, 16, 1.0);
  ComplexField f(grid, 1);
  for (auto& v : f.data()) v = 1.0;
  dealias(f);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    const bool keep = std::abs(grid.signed_index(idx[0])) <= 5 && std::abs(grid.signed_index(idx[1])) <= 5;
    CHECK(f.data()[i] == cplx(keep ? 1.0 : 0.0));
  }
}

TEST_CASE("viscous tensor examples") {
  const Grid grid(3, 16, 5.0);
  const auto p = params_with(1.7, 0.4, 1.0, 1.0);
  const RealField zero = vector_field(grid);
  CHECK(max_abs(viscous_tensor(zero, p).data()) == 0.0);

  RealField c = vector_field(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) c.component(0)[i] = 2.0, c.component(2)[i] = -1.0;
  CHECK(max_abs(viscous_tensor(c, p).data()) <= 1e-13);

  RealField shear = vector_field(grid);
  const double k = 2 * pi / grid.box_len();
  for (std::size_t i = 0; i < grid.size(); ++i) shear.component(0)[i] = std::sin(k * grid.position(i)[1]);
  const auto S = viscous_tensor(shear, p);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double expect = 1.7 * k * std::cos(k * grid.position(i)[1]);
    CHECK(S.tensor(0, 1)[i] == doctest::Approx(expect).epsilon(1e-12).scale(1));
    CHECK(S.tensor(1, 0)[i] == doctest::Approx(expect).epsilon(1e-12).scale(1));
    for (int d = 0; d < 3; ++d) CHECK(std::abs(S.tensor(d, d)[i]) <= 1e-12);
  }
}

TEST_CASE("Korteweg tensor: constants vanish, symmetry, analytic Gaussian trace") {
  const Grid grid(3, 64, 16.0);
  const auto p = params_with(1, 0, 0.6, 1.0);
  RealField c = scalar_field(grid);
  for (auto& v : c.data()) v = 1.4;
  CHECK(max_abs(korteweg_tensor(c, p).data()) <= 1e-12);

  const double w = 1.0, A = 0.3;
  const auto rho = gaussian_bump(grid, box_center(grid), w, A);
  const auto K = korteweg_tensor(rho, p);
  const auto ctr = box_center(grid);
  double worst_sym = 0, worst_trace = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) worst_sym = std::max(worst_sym, std::abs(K.tensor(j, k)[i] - K.tensor(k, j)[i]));
    const auto x = grid.position(i);
    double r2 = 0;
    for (int d = 0; d < 3; ++d) r2 += (x[d] - ctr[d]) * (x[d] - ctr[d]);
    const double r = rho.data()[i];
    const double grad2 = r2 / (w * w * w * w) * r * r;
    const double lap_sq = r * r * (4 * r2 / (w * w * w * w) - 6 / (w * w));
    const double trace = 0.6 * 1.5 * (lap_sq - grad2) - 0.6 * grad2;
    worst_trace = std::max(worst_trace, std::abs(K.tensor(0, 0)[i] + K.tensor(1, 1)[i] + K.tensor(2, 2)[i] - trace));
  }
  CHECK(worst_sym <= 1e-15);
  CHECK(worst_trace <= 1e-9);
}

TEST_CASE("pressure remainder: quadratic law and zero") {
  const Grid grid(2, 16, 4.0);
  const auto p = params_with(1, 0, 1, 2.0);
  test::Gen g(0x9a01);
  RealField th = scalar_field(grid);
  for (auto& v : th.data()) v = g.uniform(-0.9, 0.9);
  const auto pr = pressure_remainder(th, p);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(pr.data()[i] == doctest::Approx(1.3 * th.data()[i] * th.data()[i]).epsilon(1e-14));
  CHECK(max_abs(pressure_remainder(scalar_field(grid), p).data()) == 0.0);
}

TEST_CASE("pressure remainder equals the Taylor remainder of a smooth law") {
  // P = 0.5 (r - 1)^2 + 0.2 (r - 1)^3 - 0.05 (r - 1)^4 + 0.01 (r - 1)^5, exact for GL8.
  const PressureLaw law = polynomial_pressure({0.0, 0.0, 0.5, 0.2, -0.05, 0.01}, 1.0, 0.2, 5.0);
  const auto p = make_params(1, 0, 1, 1.0, law);
  const Grid grid(1, 64, 1.0);
  RealField th = scalar_field(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) th.data()[i] = -0.7 + 3.5 * static_cast<double>(i) / 64.0;
  const auto pr = pressure_remainder(th, p);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = th.data()[i];
    const double taylor = law.evaluate(1.0 + t) - law.evaluate(1.0) - law.d1(1.0) * t;
    CHECK(pr.data()[i] == doctest::Approx(taylor).epsilon(1e-12).scale(1e-12));
  }
  th.data()[3] = 4.5;
  CHECK_THROWS_AS(pressure_remainder(th, p), ValidityExceeded);
}

TEST_CASE("bracket and g vanish for zero data") {
  const Grid grid(3, 8, 4.0);
  const auto p = params_with(1, 0.5, 1, 1.0);
  const RealField th = scalar_field(grid), m = vector_field(grid);
  CHECK(max_abs(bracket_tensor(th, m, p).data()) == 0.0);
  CHECK(max_abs(nonlinearity_g(th, m, p).data()) == 0.0);
}

TEST_CASE("property: at theta = 0 the bracket is m (x) m / rho*") {
  test::Gen g(0x9a02);
  for (int trial = 0; trial < 10; ++trial) {
    const double rho = g.uniform(0.5, 2);
    const auto p = params_with(g.uniform(0.5, 2), g.uniform(0, 1), g.uniform(0.5, 2), rho);
    const Grid grid(g.integer(2, 3), 32, g.uniform(2, 10));
    const int dim = grid.dim();
    // Modes up to n/6 so every product stays inside the 2/3 band.
    const auto m = band_limited(g, grid, static_cast<std::size_t>(dim), 4, 0.3);
    const RealField th = scalar_field(grid);
    const auto H = bracket_tensor(th, m, p);
    RealField mm = tensor_field(grid);
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (std::size_t i = 0; i < grid.size(); ++i)
          mm.tensor(j, k)[i] = m.component(j)[i] * m.component(k)[i] / rho;
    CHECK(max_abs_diff(H.data(), mm.data()) <= 1e-12);

    const auto gfield = nonlinearity_g(th, m, p);
    for (int j = 0; j < dim; ++j) {
      RealField div = scalar_field(grid);
      for (int k = 0; k < dim; ++k) {
        RealField comp = scalar_field(grid);
        std::copy(mm.tensor(j, k).begin(), mm.tensor(j, k).end(), comp.data().begin());
        MultiIndex a{};
        a[k] = 1;
        const auto d = spectral_derivative(comp, a);
        for (std::size_t i = 0; i < grid.size(); ++i) div.data()[i] -= d.data()[i];
      }
      CHECK(max_abs_diff(gfield.component(j), div.data()) <= 1e-12);
    }
  }
}

TEST_CASE("spectral -Div H converges to fourth-order differences of H") {
  const auto p = params_with(1.0, 0.3, 0.8, 1.0);
  std::vector<double> errs;
  for (std::size_t n : {32, 64}) {
    const Grid grid(2, n, 12.0);
    const auto th = gaussian_bump(grid, box_center(grid), 1.0, 0.2);
    RealField m = vector_field(grid);
    const auto b1 = gaussian_bump(grid, box_center(grid), 1.0, 0.1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.position(i);
      m.component(0)[i] = b1.data()[i] * std::cos(2 * pi * x[1] / 12.0);
      m.component(1)[i] = -0.5 * b1.data()[i];
    }
    const auto H = bracket_tensor(th, m, p);
    const auto gf = nonlinearity_g(th, m, p);
    double err = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (int j = 0; j < 2; ++j) {
        double div = 0;
        for (int k = 0; k < 2; ++k) div += fd4(H, static_cast<std::size_t>(j * 2 + k), i, k);
        err = std::max(err, std::abs(-div - gf.component(j)[i]));
      }
    errs.push_back(err);
  }
  CHECK(errs[0] / errs[1] > 12.0);
}

TEST_CASE("range condition is enforced") {
  // Smooth bumps, so the input truncation leaves their peaks in place.
  const Grid grid(2, 32, 8.0);
  const auto p = params_with(1, 0, 1, 1.0);
  const RealField m = vector_field(grid);
  CHECK_THROWS_AS(bracket_tensor(gaussian_bump(grid, box_center(grid), 1.2, -0.76), m, p), RangeViolation);
  CHECK_THROWS_AS(nonlinearity_g(gaussian_bump(grid, box_center(grid), 1.2, 3.01), m, p), RangeViolation);
  CHECK_NOTHROW(bracket_tensor(gaussian_bump(grid, box_center(grid), 1.2, 2.9), m, p));
  CHECK_NOTHROW(bracket_tensor(gaussian_bump(grid, box_center(grid), 1.2, -0.74), m, p));
}

TEST_CASE("g has zero mean") {
  test::Gen g(0x9a03);
  const Grid grid(3, 16, 6.0);
  const auto p = params_with(1, 0.2, 1, 1.0);
  RealField th = band_limited(g, grid, 1, 3, 0.1);
  const RealField m = band_limited(g, grid, 3, 3, 0.2);
  const auto gh = forward_transform(nonlinearity_g(th, m, p));
  for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(gh.component(c)[0]) <= 1e-12 * grid.size());
}
