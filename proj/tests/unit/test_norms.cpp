#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gen.hpp"
#include "nsk/errors.hpp"
#include "nsk/fft.hpp"
#include "nsk/norms.hpp"
#include "nsk/spectral.hpp"

using namespace nsk;
using std::numbers::pi;

namespace {

RealField random_field(test::Gen& g, const Grid& grid, std::size_t ncomp = 1) {
  RealField f(grid, ncomp);
  for (auto& v : f.data()) v = g.normal();
  return f;
}

RealField plane_sine(const Grid& grid) {
  RealField f = scalar_field(grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    f.data()[i] = std::sin(2 * pi * grid.position(i)[0] / grid.box_len());
  return f;
}

NormSeries constant_series(const std::string& name, double v, double t_end, int n) {
  NormSeries s(name);
  for (int i = 0; i <= n; ++i) s.append(t_end * i / n, v);
  return s;
}

NormBundle zero_bundle(double q1, double q2, double t_end) {
  NormBundle b;
  for (const auto& k : constituent_keys(q1, q2)) b.emplace(k, constant_series(k, 0.0, t_end, 8));
  return b;
}

}  // namespace

TEST_CASE("lp_norm of a constant is |c| V^(1/q)") {
  const Grid grid(3, 8, 2.0);
  RealField f = scalar_field(grid);
  for (auto& v : f.data()) v = -1.5;
  CHECK(lp_norm(f, 2) == doctest::Approx(1.5 * std::sqrt(8.0)).epsilon(1e-14));
  CHECK(lp_norm(f, 1) == doctest::Approx(1.5 * 8.0).epsilon(1e-14));
  CHECK(lp_norm(f, kInfinity) == 1.5);
}

TEST_CASE("vector fields use the pointwise Euclidean length") {
  const Grid grid(2, 8, 1.0);
  RealField f = vector_field(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f.component(0)[i] = 3.0;
    f.component(1)[i] = 4.0;
  }
  CHECK(lp_norm(f, kInfinity) == doctest::Approx(5.0));
  CHECK(lp_norm(f, 2) == doctest::Approx(5.0));
}

TEST_CASE("Linf of a Gaussian bump centred on a node is its amplitude") {
  const Grid grid(3, 16, 10.0);
  const auto f = gaussian_bump(grid, box_center(grid), 1.5, 2.25);
  CHECK(lp_norm(f, kInfinity) == doctest::Approx(2.25).epsilon(1e-15));
}

TEST_CASE("Parseval: spectral and real-space L2 agree") {
  test::Gen g(0x6e01);
  for (int dim = 1; dim <= 3; ++dim) {
    const Grid grid(dim, 16, 3.0);
    const auto f = random_field(g, grid, 2);
    CHECK(l2_norm_spectral(forward_transform(f)) == doctest::Approx(lp_norm(f, 2)).epsilon(1e-12));
  }
}

TEST_CASE("property: Holder on the finite box") {
  test::Gen g(0x6e02);
  for (int trial = 0; trial < 200; ++trial) {
    const Grid grid(g.integer(1, 3), 8, g.uniform(0.5, 20));
    const auto f = random_field(g, grid, static_cast<std::size_t>(g.integer(1, 3)));
    double q1 = g.uniform(1, 8), q2 = g.integer(0, 3) == 0 ? kInfinity : g.uniform(1, 8);
    if (q1 > q2) std::swap(q1, q2);
    const double V = grid.volume();
    const double bound = std::pow(V, 1 / q1 - (std::isinf(q2) ? 0.0 : 1 / q2)) * lp_norm(f, q2);
    CHECK(lp_norm(f, q1) <= bound * (1 + 1e-12));
  }
}

TEST_CASE("sobolev_norm examples") {
  test::Gen g(0x6e03);
  const Grid grid(2, 16, 4.0);
  const auto f = random_field(g, grid);
  CHECK(sobolev_norm(f, 0, 3.0) == doctest::Approx(lp_norm(f, 3.0)).epsilon(1e-14));

  RealField c = scalar_field(grid);
  for (auto& v : c.data()) v = 0.7;
  for (int k = 0; k <= 3; ++k)
    CHECK(sobolev_norm(c, k, 2.0) == doctest::Approx(lp_norm(c, 2.0)).epsilon(1e-12));

  const auto s = plane_sine(grid);
  const auto ds = spectral_derivative(s, {1, 0, 0, 0});
  for (double q : {2.0, kInfinity})
    CHECK(lp_norm(ds, q) / lp_norm(s, q) == doctest::Approx(2 * pi / grid.box_len()).epsilon(1e-12));
  // Only d/dx1 survives, so the k = 1 norm adds exactly that term.
  CHECK(sobolev_norm(s, 1, 2.0) == doctest::Approx((1 + 2 * pi / grid.box_len()) * lp_norm(s, 2.0)));
}

TEST_CASE("NormSeries rejects decreasing times and negative values") {
  NormSeries s("x");
  s.append(0.0, 1.0);
  CHECK_THROWS_AS(s.append(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(s.append(1.0, -1e-300), InvalidArgument);
  CHECK_THROWS_AS(s.append(1.0, std::nan("")), InvalidArgument);
  s.append(2.0, 0.0);
  CHECK(s.size() == 2);
}

TEST_CASE("weighted_sup examples") {
  CHECK(weighted_sup(constant_series("c", 3.0, 10, 20), 0.0, 0.0, 10.0) == 3.0);
  NormSeries one("one");
  one.append(1.0, 2.5);
  CHECK(weighted_sup(one, 1.0, 1.0, 1.0) == doctest::Approx(5.0));
  test::Gen g(0x6e04);
  for (int trial = 0; trial < 50; ++trial) {
    const double ell = g.uniform(0, 3);
    NormSeries s("decay");
    for (int i = 0; i <= 40; ++i) {
      const double t = 0.25 * i;
      s.append(t, std::pow(1 + t, -ell));
    }
    const double a = 0.25 * g.integer(0, 20);
    CHECK(weighted_sup(s, ell, a, 10.0) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("weighted norms refuse windows the samples do not reach") {
  const auto s = constant_series("c", 1.0, 5, 10);
  CHECK_THROWS_AS(weighted_sup(s, 0.0, 0.0, 6.0), WindowUncovered);
  CHECK_THROWS_AS(weighted_lp_in_time(s, 0.0, 2.0, 6.0), WindowUncovered);
  CHECK_THROWS_AS(weighted_sup(NormSeries("empty"), 0.0, 0.0, 0.0), WindowUncovered);
}

TEST_CASE("weighted_lp_in_time: trapezoid is exact for constants and linear integrands") {
  CHECK(weighted_lp_in_time(constant_series("c", 2.0, 4.0, 7), 0.0, 2.0, 4.0) ==
        doctest::Approx(2.0 * 2.0).epsilon(1e-14));
  // (1+s) v with v = 1 and p = 1 integrates to t + t^2/2.
  CHECK(weighted_lp_in_time(constant_series("c", 1.0, 3.0, 5), 1.0, 1.0, 3.0) ==
        doctest::Approx(3.0 + 4.5).epsilon(1e-14));
}

TEST_CASE("aggregate_N examples") {
  const AggregateExponents e{3, 4.0, 2.5, 15.0, 0.35};
  NormBundle b = zero_bundle(e.q1, e.q2, 2.0);
  CHECK(aggregate_N(b, e, 2.0) == 0.0);

  // One nonzero constituent sampled only at t = 0, where every weight is 1.
  for (const auto& key : constituent_keys(e.q1, e.q2)) {
    NormBundle single;
    for (const auto& k : constituent_keys(e.q1, e.q2)) {
      NormSeries s(k);
      s.append(0.0, k == key ? 0.8 : 0.0);
      single.emplace(k, s);
    }
    if (key.rfind("sup", 0) == 0) CHECK(aggregate_N(single, e, 0.0) == doctest::Approx(0.8));
  }
  // The time-integral constituents over [0, 1] of a constant with ell = 0.
  AggregateExponents flat = e;
  flat.tau = e.dim / (2.0 * e.q1);  // ell_1 = 0
  NormBundle lp = zero_bundle(flat.q1, flat.q2, 1.0);
  lp[strong_key(flat.q1)] = constant_series(strong_key(flat.q1), 0.5, 1.0, 4);
  CHECK(aggregate_N(lp, flat, 1.0) == doctest::Approx(0.5).epsilon(1e-14));

  b.erase(strong_key(e.q2));
  b.erase(sup_key(1, kInfinity));
  try {
    aggregate_N(b, e, 1.0);
    FAIL("expected MissingConstituent");
  } catch (const MissingConstituent& err) {
    const std::string msg = err.what();
    CHECK(msg.find(strong_key(e.q2)) != std::string::npos);
    CHECK(msg.find(sup_key(1, kInfinity)) != std::string::npos);
  }
}

TEST_CASE("property: aggregate_N is nondecreasing in t") {
  test::Gen g(0x6e05);
  const AggregateExponents e{3, 4.0, 2.5, 15.0, 0.35};
  for (int trial = 0; trial < 30; ++trial) {
    NormBundle b;
    for (const auto& k : constituent_keys(e.q1, e.q2)) {
      NormSeries s(k);
      for (int i = 0; i <= 30; ++i) s.append(0.2 * i, g.uniform(0, 1) * std::exp(-0.1 * i));
      b.emplace(k, s);
    }
    double prev = 0.0;
    for (int i = 0; i <= 30; ++i) {
      const double v = aggregate_N(b, e, 0.2 * i);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("constituent keys and values line up") {
  const Grid grid(3, 8, 6.0);
  SpectralState u(grid), du(grid);
  const auto keys = constituent_keys(2.5, 15.0);
  CHECK(keys.size() == 10);
  CHECK(sup_key(0, kInfinity) == "sup_j0_qinf");
  const auto values = constituent_values(u, du, 2.5, 15.0);
  for (const auto& k : keys) {
    REQUIRE(values.count(k) == 1);
    CHECK(values.at(k) == 0.0);
  }
}
