#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include "cbop/potential.hpp"

using namespace cbop;
using namespace cbop::testing;

namespace {

// Collocation oracle for the vector equilibrium problem: assemble the two
// integral-equation constraints on doubled grids with closed-form
// on-interval log-moment rows, and solve one dense system for
// (density1, density2, gamma1, gamma2).
struct CollocationResult {
  Real gamma1, gamma2;
};

CollocationResult collocation_equilibrium_oracle(const Interval& iv1, const Interval& iv2,
                                                 const PrecisionConfig& base) {
  PrecisionConfig cfg = PrecisionConfig::with_bits(base.mantissa_bits, 2 * base.quad_order);
  ScopedPrecision sp(cfg.mantissa_bits);
  ChebGrid g1 = cheb_grid(iv1, cfg), g2 = cheb_grid(iv2, cfg);
  long n = cfg.quad_order;
  Real pi = const_pi();

  // V at own-interval nodes: V = -L D v, where D is the coefficient map and
  // L the on-cut log-moment row; cross potentials by direct quadrature.
  auto self_rows = [&](const ChebGrid& g) {
    std::vector<std::vector<Real>> D(n, std::vector<Real>(n));
    for (long k = 0; k < n; ++k)
      for (long j = 0; j < n; ++j)
        D[k][j] = Real(k == 0 ? 1 : 2) / Real(n) * cos(Real(k) * g.theta[j]);
    Real m0 = pi * log((g.interval.b - g.interval.a) / Real(4L));
    std::vector<std::vector<Real>> rows(n, std::vector<Real>(n, Real(0L)));
    for (long i = 0; i < n; ++i) {
      std::vector<Real> L(n);
      L[0] = m0;
      for (long k = 1; k < n; ++k) L[k] = -pi * cos(Real(k) * g.theta[i]) / Real(k);
      for (long j = 0; j < n; ++j) {
        Real s(0L);
        for (long k = 0; k < n; ++k) s += L[k] * D[k][j];
        rows[i][j] = -s;
      }
    }
    return rows;
  };
  auto cross_rows = [&](const ChebGrid& at, const ChebGrid& from) {
    std::vector<std::vector<Real>> rows(n, std::vector<Real>(n));
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j)
        rows[i][j] = -from.weights[0] * log(abs(at.nodes[i] - from.nodes[j]));
    return rows;
  };

  auto a11 = self_rows(g1);
  auto a22 = self_rows(g2);
  auto a12 = cross_rows(g1, g2);
  auto a21 = cross_rows(g2, g1);

  long dim = 2 * n + 2;
  std::vector<std::vector<Real>> A(dim, std::vector<Real>(dim, Real(0L)));
  std::vector<Real> rhs(dim, Real(0L));
  Real half(0.5);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      A[i][j] = a11[i][j];
      A[i][n + j] = -half * a12[i][j];
    }
    A[i][2 * n] = Real(-1L);
    for (long j = 0; j < n; ++j) {
      A[n + i][j] = -half * a21[i][j];
      A[n + i][n + j] = a22[i][j];
    }
    A[n + i][2 * n + 1] = Real(-1L);
  }
  for (long j = 0; j < n; ++j) {
    A[2 * n][j] = g1.weights[0];
    A[2 * n + 1][n + j] = g2.weights[0];
  }
  rhs[2 * n] = Real(1L);
  rhs[2 * n + 1] = Real(1L);
  std::vector<Real> x = lin_solve(std::move(A), std::move(rhs));
  return CollocationResult{x[2 * n], x[2 * n + 1]};
}

}  // namespace

TEST_CASE("log_potential closed cases") {
  auto cfg = quick_cfg();
  ScopedPrecision sp(cfg.mantissa_bits);
  ChebGrid g = cheb_grid(Interval(-1.0, 1.0), cfg);
  ChebDensity omega = chebyshev_density(g);

  SUBCASE("Robin constant of [-1,1] at the origin (on the cut)") {
    CHECK(close_abs(log_potential(omega, Real(0L)), log(Real(2L)), pow2(-100)));
  }
  SUBCASE("constant on the whole interval") {
    for (double x : {-0.9, -0.2, 0.7})
      CHECK(close_abs(log_potential(omega, Real(x)), log(Real(2L)), pow2(-100)));
  }
  SUBCASE("exterior identity V = ln 2 - ln|Psi|") {
    Real v = log_potential(omega, Real(2L));
    Real expect = log(Real(2L)) - log(Real(2L) + sqrt(Real(3L)));
    CHECK(close_abs(v, expect, pow2(-100)));
    // direct quadrature cross-check
    Real direct = -quad_eta([](const Real& x) { return log(abs(Real(2L) - x)) / const_pi(); }, g);
    CHECK(close_abs(v, direct, cfg.fp_tol));
  }
  SUBCASE("decay at infinity: V(z) + mass ln|z| -> 0") {
    Real R(1e8);
    CHECK(close_abs(log_potential(omega, Complex(Real(0L), R)) + log(R), Real(0L), Real(1e-7)));
  }
}

TEST_CASE("complex_phi") {
  auto cfg = quick_cfg();
  ScopedPrecision sp(cfg.mantissa_bits);
  ChebGrid g = cheb_grid(Interval(-1.0, 1.0), cfg);
  ComparisonFn cf{chebyshev_density(g), Real(2L)};

  SUBCASE("arcsine measure at u=2: (2+sqrt 3)/2") {
    Complex v = complex_phi(cf, Complex(Real(2L)));
    CHECK(close_abs(v, Complex((Real(2L) + sqrt(Real(3L))) / Real(2L)), pow2(-100)));
  }
  SUBCASE("real positive right of the interval") {
    Complex v = complex_phi(cf, Complex(Real(5L)));
    CHECK(v.im.is_zero());
    CHECK(v.re > Real(0L));
  }
  SUBCASE("monic at infinity") {
    Real R(1e6);
    Complex v = complex_phi(cf, Complex(R, R));
    CHECK(close_rel(abs(v), abs(Complex(R, R)), Real(1e-4)));
  }
  SUBCASE("|Phi| = exp(-V) for a balayage density") {
    ChebDensity lam = balayage_onto(Real(3L), Interval(-1.0, 1.0), cfg);
    ComparisonFn cf2{lam, Real(1L)};
    Complex u(Real(5L));
    Real lhs = abs(complex_phi(cf2, u));
    Real rhs = exp(-log_potential(lam, u));
    CHECK(close_abs(lhs, rhs, cfg.fp_tol));
  }
}

TEST_CASE("balayage") {
  auto cfg = quick_cfg();
  ScopedPrecision sp(cfg.mantissa_bits);
  Interval iv(-1.0, 1.0);

  SUBCASE("point sweep of delta_2: closed-form density and unit mass") {
    ChebDensity b = balayage_onto(Real(2L), iv, cfg);
    CHECK(close_abs(b.mass, Real(1L), cfg.fp_tol));
    // d(eta)-density sqrt(3)/(pi(2-x)) equals dx-density sqrt(3)/(pi(2-x)sqrt(1-x^2))
    for (size_t j = 0; j < b.grid.nodes.size(); j += 11) {
      Real x = b.grid.nodes[j];
      Real expect = sqrt(Real(3L)) / (const_pi() * (Real(2L) - x));
      CHECK(close_abs(b.values[j], expect, pow2(-100)));
    }
  }
  SUBCASE("potential difference constant on the target") {
    ChebDensity b = balayage_onto(Real(2L), iv, cfg);
    Real c0;
    bool first = true;
    for (double x : {-0.8, -0.3, 0.2, 0.9}) {
      Real diff = log_potential(b, Real(x)) + log(abs(Real(x) - Real(2L)));
      if (first) { c0 = diff; first = false; }
      else CHECK(close_abs(diff, c0, cfg.equil_tol()));
    }
  }
  SUBCASE("far source approaches the arcsine measure") {
    ChebDensity b = balayage_onto(Real(1e7), iv, cfg);
    Real inv_pi = Real(1L) / const_pi();
    for (size_t j = 0; j < b.grid.nodes.size(); j += 17)
      CHECK(close_rel(b.values[j], inv_pi, Real(1e-6)));
  }
  SUBCASE("density source: mass preserved") {
    ChebGrid gs = cheb_grid(Interval(3.0, 5.0), cfg);
    ChebDensity src = chebyshev_density(gs);
    ChebDensity b = balayage_onto(src, Interval(-1.0, 1.0), cfg);
    CHECK(close_abs(b.mass, Real(1L), cfg.fp_tol));
  }
  SUBCASE("symmetric source onto symmetric interval gives even density") {
    ChebDensity l = balayage_onto(Real(-2L), iv, cfg);
    ChebDensity r = balayage_onto(Real(2L), iv, cfg);
    size_t n = l.values.size();
    for (size_t j = 0; j < n; j += 7) {
      Real sum_j = l.values[j] + r.values[j];
      Real sum_m = l.values[n - 1 - j] + r.values[n - 1 - j];
      CHECK(close_abs(sum_j, sum_m, pow2(-100)));
    }
  }
  SUBCASE("source intersecting target rejected") {
    CHECK_THROWS_AS(balayage_onto(Real(0.5), iv, cfg), NumericError);
  }
}

TEST_CASE("weighted equilibrium") {
  auto cfg = quick_cfg();
  ScopedPrecision sp(cfg.mantissa_bits);
  Interval iv(-1.0, 1.0);

  SUBCASE("no field: arcsine measure and the Robin constant") {
    WeightedEquilibrium we = weighted_equilibrium(iv, FieldSource::point(Real(3L), Real(0L)), cfg);
    CHECK(close_abs(we.gamma, log(Real(2L)), cfg.equil_tol()));
    Real inv_pi = Real(1L) / const_pi();
    for (size_t j = 0; j < we.lambda.values.size(); j += 13)
      CHECK(close_abs(we.lambda.values[j], inv_pi, cfg.fp_tol));
  }
  SUBCASE("unit point mass at 3: lambda = balayage, constancy holds") {
    WeightedEquilibrium we = weighted_equilibrium(iv, FieldSource::point(Real(3L), Real(1L)), cfg);
    CHECK(we.residual < cfg.equil_tol());
    ChebDensity b = balayage_onto(Real(3L), iv, cfg);
    for (size_t j = 0; j < b.values.size(); j += 13)
      CHECK(close_abs(we.lambda.values[j], b.values[j], cfg.fp_tol));
    CHECK(close_abs(we.lambda.mass, Real(1L), cfg.fp_tol));
  }
  SUBCASE("half point mass: linear combination") {
    WeightedEquilibrium we = weighted_equilibrium(iv, FieldSource::point(Real(3L), Real(0.5)), cfg);
    ChebDensity b = balayage_onto(Real(3L), iv, cfg);
    Real inv_pi = Real(1L) / const_pi();
    for (size_t j = 0; j < b.values.size(); j += 13) {
      Real expect = Real(0.5) * b.values[j] + Real(0.5) * inv_pi;
      CHECK(close_abs(we.lambda.values[j], expect, cfg.fp_tol));
    }
  }
  SUBCASE("mass above 1 rejected") {
    CHECK_THROWS_AS(weighted_equilibrium(iv, FieldSource::point(Real(3L), Real(1.5)), cfg),
                    NumericError);
  }
}

TEST_CASE("vector equilibrium") {
  auto cfg = quick_cfg();
  ScopedPrecision sp(cfg.mantissa_bits);
  Interval d1(-2.0, -1.0), d2(1.0, 2.0);
  EquilibriumPair eq = vector_equilibrium(d1, d2, cfg);

  SUBCASE("probability masses") {
    CHECK(close_abs(eq.lambda1.mass, Real(1L), cfg.fp_tol));
    CHECK(close_abs(eq.lambda2.mass, Real(1L), cfg.fp_tol));
  }
  SUBCASE("equilibrium identities hold") {
    CHECK(eq.residual1 < cfg.equil_tol());
    CHECK(eq.residual2 < cfg.equil_tol());
  }
  SUBCASE("mirror symmetry of the symmetric pair") {
    size_t n = eq.lambda1.values.size();
    for (size_t j = 0; j < n; j += 9)
      CHECK(close_abs(eq.lambda1.values[j], eq.lambda2.values[n - 1 - j], cfg.fp_tol));
    CHECK(close_abs(eq.gamma1, eq.gamma2, Real(16L) * cfg.fp_tol));
  }
  SUBCASE("iteration contracts") {
    for (size_t k = 2; k + 1 < eq.step_history.size(); ++k) {
      Real ratio = eq.step_history[k + 1] / eq.step_history[k];
      CHECK(ratio <= Real(0.55));
    }
  }
  SUBCASE("densities positive") {
    for (const Real& v : eq.lambda1.values) CHECK(v > Real(0L));
  }
  SUBCASE("gammas match the collocation oracle") {
    CollocationResult oc = collocation_equilibrium_oracle(d1, d2, quick_cfg(128, 48));
    CHECK(close_abs(eq.gamma1, oc.gamma1, Real(10L) * cfg.equil_tol()));
    CHECK(close_abs(eq.gamma2, oc.gamma2, Real(10L) * cfg.equil_tol()));
  }
  SUBCASE("asymmetric pair also converges") {
    EquilibriumPair eq2 = vector_equilibrium(Interval(-3.0, -1.5), Interval(0.5, 1.0), cfg);
    CHECK(eq2.residual1 < cfg.equil_tol());
    CHECK(eq2.residual2 < cfg.equil_tol());
    CHECK(close_abs(eq2.lambda1.mass, Real(1L), cfg.fp_tol));
  }
}

TEST_CASE("comparison functions from equilibrium") {
  auto cfg = quick_cfg();
  ScopedPrecision sp(cfg.mantissa_bits);
  EquilibriumPair eq = vector_equilibrium(Interval(-2.0, -1.0), Interval(1.0, 2.0), cfg);
  auto [phi1, phi2] = comparison_functions(eq);

  SUBCASE("C equals exp(gamma), symmetric pair has equal constants") {
    CHECK(close_abs(phi1.C, exp(eq.gamma1), pow2(-110)));
    CHECK(close_abs(phi1.C, phi2.C, Real(100L) * cfg.fp_tol));
  }
  SUBCASE("monic normalization at a far point") {
    Real R(1e6);
    Complex v = complex_phi(phi2, Complex(R));
    CHECK(close_rel(v.re / R, Real(1L), Real(1e-4)));
  }
  SUBCASE("equilibrium identity as modulus relation |C1 Phi1|^2 e^{-V2} structure") {
    // |Phi1(x)| C1 ... restatement: V1 - V2/2 - gamma1 = 0 on Delta1
    for (double x : {-1.9, -1.5, -1.1}) {
      Real lhs = log_potential(eq.lambda1, Real(x)) -
                 Real(0.5) * log_potential(eq.lambda2, Complex(Real(x))) - eq.gamma1;
      CHECK(abs(lhs) < cfg.equil_tol());
    }
  }
}

TEST_CASE("conformal branches") {
  auto cfg = quick_cfg();
  ScopedPrecision sp(cfg.mantissa_bits);
  Interval d1(-2.0, -1.0), d2(1.0, 2.0);
  ConformalBranches cb = conformal_branches(d1, d2, cfg);

  SUBCASE("boundary laws converged") {
    CHECK(cb.boundary_residual < Real(4L) * cfg.fp_tol);
  }
  SUBCASE("F_k'(inf) positive; symmetric pair has equal derivatives") {
    CHECK(cb.f1_inf_deriv > Real(0L));
    CHECK(close_abs(cb.f1_inf_deriv, cb.f2_inf_deriv, Real(100L) * cfg.fp_tol));
  }
  SUBCASE("otro identification: F_k/F_k'(inf) = Phi_k at exterior probes") {
    EquilibriumPair eq = vector_equilibrium(d1, d2, cfg);
    auto [phi1, phi2] = comparison_functions(eq);
    for (const Complex& z : exterior_ring(Interval(-2.0, 2.0), 1.6, 8)) {
      Complex lhs1 = conformal_F(cb, 1, z) / Complex(cb.f1_inf_deriv);
      CHECK(close_rel(abs(lhs1 - complex_phi(phi1, z)), Real(0L), Real(10L) * cfg.fp_tol));
      Complex lhs2 = conformal_F(cb, 2, z) / Complex(cb.f2_inf_deriv);
      CHECK(close_rel(abs(lhs2 - complex_phi(phi2, z)), Real(0L), Real(10L) * cfg.fp_tol));
    }
  }
  SUBCASE("otro constants: C_k = F_k'(inf)/sqrt(F_{k-1}'(inf) F_{k+1}'(inf))") {
    EquilibriumPair eq = vector_equilibrium(d1, d2, cfg);
    Real c1 = cb.f1_inf_deriv / sqrt(cb.f2_inf_deriv);
    Real c2 = cb.f2_inf_deriv / sqrt(cb.f1_inf_deriv);
    CHECK(close_rel(c1, exp(eq.gamma1), Real(10L) * cfg.fp_tol));
    CHECK(close_rel(c2, exp(eq.gamma2), Real(10L) * cfg.fp_tol));
  }
  SUBCASE("mirror of the symmetric configuration") {
    Complex z(0.0, 3.0);
    Complex f1 = conformal_F(cb, 1, z);
    Complex f2 = conformal_F(cb, 2, Complex(-z.re, z.im));
    // F2(-conj z) relates to conj F1(z) by the reflection symmetry
    CHECK(close_abs(abs(f1), abs(f2), Real(100L) * cfg.fp_tol));
  }
}
