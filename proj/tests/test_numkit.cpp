#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

using namespace cbop;
using namespace cbop::testing;

TEST_CASE("cheb_grid invariants") {
  auto cfg = quick_cfg(128, 16);
  ScopedPrecision sp(cfg.mantissa_bits);
  Real pi = const_pi();
  Real tol = pow2(-(cfg.mantissa_bits / 2));

  SUBCASE("weights integrate d(eta): mass pi on [-1,1]") {
    ChebGrid g = cheb_grid(Interval(-1.0, 1.0), cfg);
    Real s = quad_eta([](const Real&) { return Real(1L); }, g);
    CHECK(close_abs(s, pi, tol));
  }
  SUBCASE("odd moment vanishes") {
    ChebGrid g = cheb_grid(Interval(-1.0, 1.0), cfg);
    Real s = quad_eta([](const Real& x) { return x; }, g);
    CHECK(close_abs(s, Real(0L), tol));
  }
  SUBCASE("midpoint symmetry on [1,2]") {
    auto cfg64 = quick_cfg(128, 64);
    ChebGrid g = cheb_grid(Interval(1.0, 2.0), cfg64);
    Real s = quad_eta([](const Real& x) { return x; }, g);
    CHECK(close_abs(s, Real(1.5) * pi, tol));
  }
  SUBCASE("nodes strictly increasing and interior") {
    ChebGrid g = cheb_grid(Interval(1.0, 2.0), cfg);
    for (size_t j = 0; j < g.nodes.size(); ++j) {
      CHECK(g.nodes[j] > g.interval.a);
      CHECK(g.nodes[j] < g.interval.b);
      if (j) CHECK(g.nodes[j] > g.nodes[j - 1]);
    }
  }
  SUBCASE("degenerate interval rejected") {
    CHECK_THROWS_AS(Interval(2.0, 1.0), NumericError);
    CHECK_THROWS_AS(Interval(1.0, 1.0), NumericError);
  }
}

TEST_CASE("quad_eta on analytic integrands") {
  auto cfg = quick_cfg();
  ScopedPrecision sp(cfg.mantissa_bits);
  Real pi = const_pi();
  ChebGrid g = cheb_grid(Interval(-1.0, 1.0), cfg);

  SUBCASE("x^2 classical arcsine moment") {
    Real s = quad_eta([](const Real& x) { return x * x; }, g);
    CHECK(close_abs(s, pi / Real(2L), pow2(-100)));
  }
  SUBCASE("ln(2-x): self-convergence under order doubling") {
    RealFn f = [](const Real& x) { return log(Real(2L) - x); };
    Real v1 = quad_eta(f, g);
    Real v2 = quad_eta(f, cheb_grid(Interval(-1.0, 1.0), quick_cfg(128, 128)));
    CHECK(close_abs(v1, v2, cfg.fp_tol));
  }
  SUBCASE("non-finite integrand rejected") {
    RealFn f = [](const Real& x) { return Real(1L) / (x - x); };
    CHECK_THROWS_AS(quad_eta(f, g), NumericError);
  }
}

TEST_CASE("quad_lebesgue") {
  auto cfg = quick_cfg();
  ScopedPrecision sp(cfg.mantissa_bits);

  SUBCASE("constant on [1,2]") {
    Real s = quad_lebesgue([](const Real&) { return Real(1L); }, Interval(1.0, 2.0), cfg);
    CHECK(close_abs(s, Real(1L), pow2(-100)));
  }
  SUBCASE("odd function on [-1,1]") {
    Real s = quad_lebesgue([](const Real& x) { return x; }, Interval(-1.0, 1.0), cfg);
    CHECK(close_abs(s, Real(0L), pow2(-100)));
  }
  SUBCASE("1/(3-x) equals ln 2, cross-checked by the adaptive oracle") {
    RealFn f = [](const Real& x) { return Real(1L) / (Real(3L) - x); };
    Real s = quad_lebesgue(f, Interval(-1.0, 1.0), cfg);
    Real ln2 = log(Real(2L));
    CHECK(close_abs(s, ln2, cfg.fp_tol));
    Real oracle = adaptive_quad_oracle(f, Interval(-1.0, 1.0), cfg.fp_tol / Real(8L));
    CHECK(close_abs(s, oracle, cfg.fp_tol));
  }
  SUBCASE("exactness for degree < 2n") {
    auto small = quick_cfg(128, 16);
    // x^31 on [0,1]: degree 31 = 2*16 - 1
    Real s = quad_lebesgue([](const Real& x) { return pow_int(x, 31); },
                           Interval(0.0, 1.0), small);
    CHECK(close_abs(s, Real(1L) / Real(32L), pow2(-100)));
  }
}

TEST_CASE("grids reproducible bit-for-bit") {
  auto cfg = quick_cfg();
  ScopedPrecision sp(cfg.mantissa_bits);
  ChebGrid a = cheb_grid(Interval(1.0, 2.0), cfg);
  ChebGrid b = cheb_grid(Interval(1.0, 2.0), cfg);
  for (size_t j = 0; j < a.nodes.size(); ++j) CHECK(a.nodes[j] == b.nodes[j]);
  LegendreGrid la = legendre_grid(Interval(1.0, 2.0), cfg.quad_order);
  LegendreGrid lb = legendre_grid(Interval(1.0, 2.0), cfg.quad_order);
  for (size_t j = 0; j < la.nodes.size(); ++j) {
    CHECK(la.nodes[j] == lb.nodes[j]);
    CHECK(la.weights[j] == lb.weights[j]);
  }
}

TEST_CASE("cheb coefficients and Clenshaw round trip") {
  auto cfg = quick_cfg(128, 32);
  ScopedPrecision sp(cfg.mantissa_bits);
  ChebGrid g = cheb_grid(Interval(0.0, 3.0), cfg);
  RealFn f = [](const Real& x) { return exp(x / Real(3L)); };
  std::vector<Real> vals;
  for (const Real& x : g.nodes) vals.push_back(f(x));
  std::vector<Real> c = cheb_coeffs(vals, g);
  for (size_t j = 0; j < g.nodes.size(); j += 7) {
    Real t = (g.nodes[j] - g.interval.mid()) / g.interval.half();
    CHECK(close_abs(cheb_clenshaw(c, t), vals[j], pow2(-100)));
  }
  SUBCASE("barycentric interpolation between nodes") {
    Real x(1.234);
    Real t = (x - g.interval.mid()) / g.interval.half();
    CHECK(close_abs(barycentric(g, vals, x), cheb_clenshaw(c, t), pow2(-90)));
  }
}

TEST_CASE("lin_solve") {
  auto cfg = quick_cfg();
  ScopedPrecision sp(cfg.mantissa_bits);
  SUBCASE("well-posed system") {
    std::vector<std::vector<Real>> a{{Real(2L), Real(1L)}, {Real(1L), Real(3L)}};
    std::vector<Real> x = lin_solve(a, {Real(5L), Real(10L)});
    CHECK(close_abs(x[0], Real(1L), pow2(-100)));
    CHECK(close_abs(x[1], Real(3L), pow2(-100)));
  }
  SUBCASE("singular system throws") {
    std::vector<std::vector<Real>> a{{Real(1L), Real(2L)}, {Real(2L), Real(4L)}};
    CHECK_THROWS_AS(lin_solve(a, {Real(1L), Real(2L)}), NumericError);
  }
}

TEST_CASE("precision config validation") {
  PrecisionConfig c = quick_cfg();
  c.mantissa_bits = 32;
  CHECK_THROWS_AS(c.validate(), NumericError);
  c = quick_cfg();
  c.quad_order = 8;
  CHECK_THROWS_AS(c.validate(), NumericError);
}
