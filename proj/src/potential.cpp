#include "cbop/potential.hpp"

namespace cbop {

ChebDensity make_cheb_density(ChebGrid grid, std::vector<Real> values) {
  if (values.size() != grid.nodes.size())
    throw NumericError("make_cheb_density: size mismatch");
  ChebDensity d{std::move(grid), std::move(values), {}, Real(0L)};
  for (const Real& v : d.values)
    if (!v.is_finite()) throw NumericError("make_cheb_density: non-finite value");
  d.coeffs = cheb_coeffs(d.values, d.grid);
  d.mass = quad_eta_values(d.values, d.grid);
  return d;
}

ChebDensity chebyshev_density(const ChebGrid& grid) {
  Real inv_pi = Real(1L) / const_pi();
  return make_cheb_density(grid, std::vector<Real>(grid.nodes.size(), inv_pi));
}

Complex complex_potential(const ChebDensity& d, const Complex& z) {
  const Interval& iv = d.interval();
  if (z.im.is_zero() && iv.contains(z.re))
    throw NumericError("complex_potential: z on the closed interval");
  Complex psi = psi_map(iv, z);
  Real pi = const_pi();
  // M_0 = pi Log((b-a) Psi / 4); M_k = -pi Psi^{-k} / k
  Complex w = Complex(d.coeffs[0]) * Complex(pi) *
              log(Complex((iv.b - iv.a) / Real(4L)) * psi);
  Complex ipsi = inv(psi);
  Complex p = ipsi;
  for (size_t k = 1; k < d.coeffs.size(); ++k) {
    w -= Complex(d.coeffs[k] * pi / Real(static_cast<long>(k))) * p;
    p *= ipsi;
  }
  return w;
}

Real log_potential(const ChebDensity& d, const Real& x) {
  const Interval& iv = d.interval();
  Real pi = const_pi();
  if (iv.contains(x)) {
    // on-cut singular moments: int T_k ln|x0 - t| d(eta) = -pi cos(k th0)/k,
    // and pi ln((b-a)/4) for k = 0
    Real t = (x - iv.mid()) / iv.half();
    Real th = atan2(sqrt(max(Real(0L), (Real(1L) - t) * (Real(1L) + t))), t);
    Real v = d.coeffs[0] * pi * log((iv.b - iv.a) / Real(4L));
    for (size_t k = 1; k < d.coeffs.size(); ++k)
      v -= d.coeffs[k] * pi * cos(Real(static_cast<long>(k)) * th) /
           Real(static_cast<long>(k));
    return -v;
  }
  return log_potential(d, Complex(x));
}

Real log_potential(const ChebDensity& d, const Complex& z) {
  if (z.im.is_zero()) {
    const Interval& iv = d.interval();
    if (iv.contains(z.re)) return log_potential(d, z.re);
  }
  return -complex_potential(d, z).re;
}

// ---------------------------------------------------------------------------
// balayage

namespace {

// density w.r.t. d(eta) of the sweep of delta_t onto [a,b]:
//   sqrt(|t-a||t-b|) / (pi |t-x|)
Real sweep_kernel(const Real& t, const Interval& iv, const Real& x, const Real& pi) {
  return sqrt(abs(t - iv.a) * abs(t - iv.b)) / (pi * abs(t - x));
}

}  // namespace

ChebDensity balayage_onto(const Real& point, const Interval& target,
                          const PrecisionConfig& cfg) {
  cfg.validate();
  ScopedPrecision sp(cfg.mantissa_bits);
  if (target.contains(point))
    throw NumericError("balayage_onto: point inside the target interval");
  ChebGrid g = cheb_grid(target, cfg);
  Real pi = const_pi();
  std::vector<Real> vals;
  vals.reserve(g.nodes.size());
  for (const Real& x : g.nodes) vals.push_back(sweep_kernel(point, target, x, pi));
  return make_cheb_density(std::move(g), std::move(vals));
}

ChebDensity balayage_onto(const ChebDensity& source, const Interval& target,
                          const PrecisionConfig& cfg) {
  cfg.validate();
  ScopedPrecision sp(cfg.mantissa_bits);
  if (!disjoint(source.interval(), target))
    throw NumericError("balayage_onto: source support intersects the target");
  ChebGrid g = cheb_grid(target, cfg);
  Real pi = const_pi();
  std::vector<Real> vals(g.nodes.size(), Real(0L));
  for (size_t i = 0; i < source.grid.nodes.size(); ++i) {
    Real w = source.grid.weights[i] * source.values[i];
    if (w.is_zero()) continue;
    for (size_t j = 0; j < g.nodes.size(); ++j)
      vals[j] += w * sweep_kernel(source.grid.nodes[i], target, g.nodes[j], pi);
  }
  return make_cheb_density(std::move(g), std::move(vals));
}

// ---------------------------------------------------------------------------
// weighted equilibrium

FieldSource FieldSource::point(Real t, Real c) {
  FieldSource f;
  f.is_point = true;
  f.t = std::move(t);
  f.c = std::move(c);
  return f;
}

FieldSource FieldSource::density(ChebDensity tau) {
  FieldSource f;
  f.is_point = false;
  f.tau = std::move(tau);
  return f;
}

Real FieldSource::mass() const { return is_point ? c : tau.mass; }

Real FieldSource::potential_at(const Real& x) const {
  if (is_point) return -c * log(abs(x - t));
  return log_potential(tau, x);
}

WeightedEquilibrium weighted_equilibrium(const Interval& iv, const FieldSource& tau,
                                         const PrecisionConfig& cfg) {
  cfg.validate();
  ScopedPrecision sp(cfg.mantissa_bits);
  Real c = tau.mass();
  if (c > Real(1L)) throw NumericError("weighted_equilibrium: source mass exceeds 1");
  if (tau.is_point) {
    if (iv.contains(tau.t))
      throw NumericError("weighted_equilibrium: point source inside the interval");
  } else if (!disjoint(tau.tau.interval(), iv)) {
    throw NumericError("weighted_equilibrium: source support intersects the interval");
  }

  ChebGrid g = cheb_grid(iv, cfg);
  std::vector<Real> vals(g.nodes.size(), Real(0L));
  if (c > Real(0L)) {
    ChebDensity swept = tau.is_point
                            ? balayage_onto(tau.t, iv, cfg)
                            : balayage_onto(tau.tau, iv, cfg);
    if (tau.is_point)
      for (size_t j = 0; j < vals.size(); ++j) vals[j] = c * swept.values[j];
    else
      vals = swept.values;
  }
  Real pi = const_pi();
  Real rest = (Real(1L) - c) / pi;
  for (Real& v : vals) v += rest;
  WeightedEquilibrium we{make_cheb_density(g, std::move(vals)), Real(0L), Real(0L)};

  // gamma = average of V_lambda - V_tau over nodes; residual = max deviation
  std::vector<Real> dev(g.nodes.size(), Real(0L));
  Real sum(0L);
  for (size_t j = 0; j < g.nodes.size(); ++j) {
    Real v = log_potential(we.lambda, g.nodes[j]);
    if (c > Real(0L)) v -= tau.potential_at(g.nodes[j]);
    dev[j] = v;
    sum += v;
  }
  we.gamma = sum / Real(static_cast<long>(g.nodes.size()));
  for (const Real& v : dev) we.residual = max(we.residual, abs(v - we.gamma));
  return we;
}

// ---------------------------------------------------------------------------
// vector equilibrium

EquilibriumPair vector_equilibrium(const Interval& iv1, const Interval& iv2,
                                   const PrecisionConfig& cfg) {
  cfg.validate();
  ScopedPrecision sp(cfg.mantissa_bits);
  if (!disjoint(iv1, iv2)) throw NumericError("vector_equilibrium: intervals overlap");

  ChebGrid g1 = cheb_grid(iv1, cfg), g2 = cheb_grid(iv2, cfg);
  ChebDensity omega1 = chebyshev_density(g1), omega2 = chebyshev_density(g2);
  ChebDensity l1 = omega1, l2 = omega2;
  Real half(0.5);
  // stop below fp_tol/2^6 so downstream identities keep their 10 fp_tol budget
  Real tol = cfg.fp_tol * pow2(-6);

  EquilibriumPair eq;
  long it = 0;
  Real step;
  for (;; ++it) {
    if (it >= cfg.max_iter)
      throw NumericError("vector_equilibrium: no convergence in max_iter; last step " +
                         to_string(step, 8));
    ChebDensity b1 = balayage_onto(l2, iv1, cfg);
    std::vector<Real> v1(g1.nodes.size());
    for (size_t j = 0; j < v1.size(); ++j)
      v1[j] = half * b1.values[j] + half * omega1.values[j];
    ChebDensity n1 = make_cheb_density(g1, std::move(v1));

    ChebDensity b2 = balayage_onto(n1, iv2, cfg);
    std::vector<Real> v2(g2.nodes.size());
    for (size_t j = 0; j < v2.size(); ++j)
      v2[j] = half * b2.values[j] + half * omega2.values[j];
    ChebDensity n2 = make_cheb_density(g2, std::move(v2));

    step = Real(0L);
    for (size_t j = 0; j < g1.nodes.size(); ++j)
      step = max(step, abs(n1.values[j] - l1.values[j]));
    for (size_t j = 0; j < g2.nodes.size(); ++j)
      step = max(step, abs(n2.values[j] - l2.values[j]));
    l1 = std::move(n1);
    l2 = std::move(n2);
    eq.step_history.push_back(step);
    if (step < tol) break;
  }
  eq.iterations = it + 1;

  // constants and residuals of the two equilibrium identities
  auto extract = [](const ChebDensity& la, const ChebDensity& lb, const ChebGrid& g,
                    Real& gamma, Real& resid) {
    std::vector<Real> dev(g.nodes.size());
    Real sum(0L);
    for (size_t j = 0; j < g.nodes.size(); ++j) {
      Real v = log_potential(la, g.nodes[j]) -
               Real(0.5) * log_potential(lb, Complex(g.nodes[j]));
      dev[j] = v;
      sum += v;
    }
    gamma = sum / Real(static_cast<long>(g.nodes.size()));
    resid = Real(0L);
    for (const Real& v : dev) resid = max(resid, abs(v - gamma));
  };
  eq.lambda1 = std::move(l1);
  eq.lambda2 = std::move(l2);
  extract(eq.lambda1, eq.lambda2, g1, eq.gamma1, eq.residual1);
  extract(eq.lambda2, eq.lambda1, g2, eq.gamma2, eq.residual2);
  return eq;
}

std::pair<ComparisonFn, ComparisonFn> comparison_functions(const EquilibriumPair& eq) {
  return {ComparisonFn{eq.lambda1, exp(eq.gamma1)}, ComparisonFn{eq.lambda2, exp(eq.gamma2)}};
}

Complex complex_phi(const ComparisonFn& cf, const Complex& u) {
  return exp(complex_potential(cf.lambda, u));
}

// ---------------------------------------------------------------------------
// conformal branches

namespace {

Complex pole_factor(const Interval& iv, const Complex& z) {
  return psi_map(iv, z) * Complex((iv.b - iv.a) / Real(4L));
}

}  // namespace

ConformalBranches conformal_branches(const Interval& iv1, const Interval& iv2,
                                     const PrecisionConfig& cfg) {
  cfg.validate();
  ScopedPrecision sp(cfg.mantissa_bits);
  if (!disjoint(iv1, iv2)) throw NumericError("conformal_branches: intervals overlap");

  ChebGrid g1 = cheb_grid(iv1, cfg), g2 = cheb_grid(iv2, cfg);
  Real cap1 = (iv1.b - iv1.a) / Real(4L), cap2 = (iv2.b - iv2.a) / Real(4L);
  Real lncap1 = log(cap1), lncap2 = log(cap2);
  // log |F_2| at Delta1 nodes, log |F_1| at Delta2 nodes
  std::vector<Real> m2(g1.nodes.size(), Real(0L)), m1(g2.nodes.size(), Real(0L));
  Real tol = cfg.fp_tol * pow2(-6);

  auto make_outer = [](const Interval& iv, const ChebGrid& g, const std::vector<Real>& m,
                       const Real& lncap) {
    std::vector<Real> lnh(m.size());
    for (size_t j = 0; j < m.size(); ++j) lnh[j] = Real(2L) * lncap - m[j];
    return szego_from_parts(iv, Real(0L), Real(0L), std::move(lnh), g);
  };

  long it = 0;
  SzegoFn o1, o2;
  for (;; ++it) {
    if (it >= cfg.max_iter)
      throw NumericError("conformal_branches: no convergence in max_iter");
    o1 = make_outer(iv1, g1, m2, lncap1);
    o2 = make_outer(iv2, g2, m1, lncap2);
    Real step(0L);
    std::vector<Real> n1(m1.size()), n2(m2.size());
    for (size_t j = 0; j < g2.nodes.size(); ++j) {
      // |F_1| at Delta2 nodes
      Real v = log(abs(pole_factor(iv1, Complex(g2.nodes[j])))) +
               log(abs(szego_eval(o1, g2.nodes[j])));
      n1[j] = v;
      step = max(step, abs(v - m1[j]));
    }
    for (size_t j = 0; j < g1.nodes.size(); ++j) {
      Real v = log(abs(pole_factor(iv2, Complex(g1.nodes[j])))) +
               log(abs(szego_eval(o2, g1.nodes[j])));
      n2[j] = v;
      step = max(step, abs(v - m2[j]));
    }
    m1 = std::move(n1);
    m2 = std::move(n2);
    if (step < tol) break;
  }

  ConformalBranches cb{iv1, iv2,          make_outer(iv1, g1, m2, lncap1),
                       make_outer(iv2, g2, m1, lncap2), Real(0L),
                       Real(0L),          Real(0L),     it + 1};
  cb.f1_inf_deriv = cb.outer1.value_at_inf;
  cb.f2_inf_deriv = cb.outer2.value_at_inf;
  // boundary-law residual: |F_1(x)|^2 vs |F_2(x)| on Delta1 nodes (and mirror)
  Real res(0L);
  for (size_t j = 0; j < g1.nodes.size(); ++j) {
    Real lhs = Real(2L) * (lncap1 - Real(0.5) * cb.outer1.ln_h(g1.nodes[j]));
    res = max(res, abs(lhs - m2[j]));
  }
  for (size_t j = 0; j < g2.nodes.size(); ++j) {
    Real lhs = Real(2L) * (lncap2 - Real(0.5) * cb.outer2.ln_h(g2.nodes[j]));
    res = max(res, abs(lhs - m1[j]));
  }
  cb.boundary_residual = res;
  return cb;
}

Complex conformal_F(const ConformalBranches& cb, int k, const Complex& z) {
  if (k == 1) return pole_factor(cb.iv1, z) * szego_eval(cb.outer1, z);
  if (k == 2) return pole_factor(cb.iv2, z) * szego_eval(cb.outer2, z);
  throw NumericError("conformal_F: k must be 1 or 2");
}

}  // namespace cbop
