#include "cbop/fixedpoint.hpp"

namespace cbop {

BoundaryPair constant_pair(const ChebGrid& g2dom, const ChebGrid& g1dom, const Real& c1,
                           const Real& c2) {
  if (!(c1 > Real(0L)) || !(c2 > Real(0L)))
    throw NumericError("constant_pair: entries must be positive");
  return BoundaryPair{g2dom, g1dom,
                      std::vector<Real>(g2dom.nodes.size(), log(c1)),
                      std::vector<Real>(g1dom.nodes.size(), log(c2))};
}

Real metric_d(const BoundaryPair& p, const BoundaryPair& q) {
  if (p.ln_g1.size() != q.ln_g1.size() || p.ln_g2.size() != q.ln_g2.size())
    throw NumericError("metric_d: incompatible pairs");
  Real m(0L);
  for (size_t j = 0; j < p.ln_g1.size(); ++j) m = max(m, abs(p.ln_g1[j] - q.ln_g1[j]));
  for (size_t j = 0; j < p.ln_g2.size(); ++j) m = max(m, abs(p.ln_g2[j] - q.ln_g2[j]));
  return m;
}

TWeights make_T_weights(const MeasurePair& pair, const RealFn* u1, const RealFn* u2,
                        const PrecisionConfig& cfg) {
  cfg.validate();
  const Measure& s1 = pair.sigma1;
  const Measure& s2 = pair.sigma2;
  TWeights w;
  w.iv1 = s1.interval();
  w.iv2 = s2.interval();
  w.grid1 = cheb_grid(w.iv1, cfg);
  w.grid2 = cheb_grid(w.iv2, cfg);
  w.p1 = s1.exponent_b();
  w.q1 = s1.exponent_a();
  w.p2 = s2.exponent_b();
  w.q2 = s2.exponent_a();
  w.ln_w1_smooth.reserve(w.grid1.nodes.size());
  for (const Real& x : w.grid1.nodes) {
    Real v = log(s1.smooth(x));
    if (u1) v += log((*u1)(x));
    w.ln_w1_smooth.push_back(v);
  }
  w.ln_w2_smooth.reserve(w.grid2.nodes.size());
  for (const Real& x : w.grid2.nodes) {
    Real v = log(s2.smooth(x));
    if (u2) v += log((*u2)(x));
    w.ln_w2_smooth.push_back(v);
  }
  return w;
}

RealFn ml_limit_h(const MeasurePair& pair) {
  Interval iv2 = pair.sigma2.interval();
  return [iv2](const Real& t) {
    return Real(1L) / sqrt(abs(t - iv2.a) * abs(t - iv2.b));
  };
}

RealFn ml_limit_ell(const MeasurePair& pair) {
  Interval iv1 = pair.sigma1.interval();
  return [iv1](const Real& t) {
    return Real(1L) / sqrt(abs(t - iv1.a) * abs(t - iv1.b));
  };
}

namespace {

// One boundary law: the outer function on C \ iv with |g*|^2 = g_other/w,
// i.e. Szego data ln h = ln w - ln g_other.
SzegoFn law_szego(const Interval& iv, const ChebGrid& grid, const Real& p, const Real& q,
                  const std::vector<Real>& ln_w_smooth, const std::vector<Real>& ln_g) {
  std::vector<Real> lnh(ln_w_smooth.size());
  for (size_t j = 0; j < lnh.size(); ++j) lnh[j] = ln_w_smooth[j] - ln_g[j];
  return szego_from_parts(iv, p, q, std::move(lnh), grid);
}

}  // namespace

BoundaryPair operator_T(const BoundaryPair& p, const TWeights& w) {
  SzegoFn g1s = law_szego(w.iv1, w.grid1, w.p1, w.q1, w.ln_w1_smooth, p.ln_g2);
  SzegoFn g2s = law_szego(w.iv2, w.grid2, w.p2, w.q2, w.ln_w2_smooth, p.ln_g1);
  BoundaryPair out;
  out.grid_on_2 = p.grid_on_2;
  out.grid_on_1 = p.grid_on_1;
  out.ln_g1.reserve(p.grid_on_2.nodes.size());
  for (const Real& y : p.grid_on_2.nodes) out.ln_g1.push_back(log(szego_eval(g1s, y)));
  out.ln_g2.reserve(p.grid_on_1.nodes.size());
  for (const Real& x : p.grid_on_1.nodes) out.ln_g2.push_back(log(szego_eval(g2s, x)));
  return out;
}

BoundaryPair operator_T(const BoundaryPair& p, const RealFn& h_tilde,
                        const MeasurePair& pair, const PrecisionConfig& cfg) {
  ScopedPrecision sp(cfg.mantissa_bits);
  TWeights w = make_T_weights(pair, &h_tilde, nullptr, cfg);
  return operator_T(p, w);
}

GPair fixed_point_G(const TWeights& w, const PrecisionConfig& cfg, GSide side) {
  ScopedPrecision sp(cfg.mantissa_bits);
  BoundaryPair cur = constant_pair(w.grid2, w.grid1, Real(1L), Real(1L));
  GPair out;
  out.side = side;
  long it = 0;
  for (;; ++it) {
    if (it >= cfg.max_iter)
      throw NumericError("fixed_point_G: no convergence in max_iter (config problem)");
    BoundaryPair next = operator_T(cur, w);
    Real step = metric_d(next, cur);
    cur = std::move(next);
    out.trace.push_back(step);
    if (step < cfg.fp_tol) break;
  }
  out.iterations = it + 1;
  out.G1 = law_szego(w.iv1, w.grid1, w.p1, w.q1, w.ln_w1_smooth, cur.ln_g2);
  out.G2 = law_szego(w.iv2, w.grid2, w.p2, w.q2, w.ln_w2_smooth, cur.ln_g1);
  // law residual = distance between the converged tables and one more sweep
  Real res(0L);
  for (size_t j = 0; j < w.grid2.nodes.size(); ++j)
    res = max(res, abs(log(szego_eval(out.G1, w.grid2.nodes[j])) - cur.ln_g1[j]));
  for (size_t j = 0; j < w.grid1.nodes.size(); ++j)
    res = max(res, abs(log(szego_eval(out.G2, w.grid1.nodes[j])) - cur.ln_g2[j]));
  out.boundary_residual = res;
  return out;
}

GPair fixed_point_G(const MeasurePair& pair, GSide side, const PrecisionConfig& cfg) {
  if (side == GSide::A) {
    RealFn h = ml_limit_h(pair);
    return fixed_point_G(make_T_weights(pair, &h, nullptr, cfg), cfg, side);
  }
  RealFn ell = ml_limit_ell(pair);
  return fixed_point_G(make_T_weights(pair, nullptr, &ell, cfg), cfg, side);
}

// ---------------------------------------------------------------------------

LimitBundle make_limit_bundle(const MeasurePair& pair, const PrecisionConfig& cfg) {
  ScopedPrecision sp(cfg.mantissa_bits);
  EquilibriumPair eq =
      vector_equilibrium(pair.sigma1.interval(), pair.sigma2.interval(), cfg);
  auto [phi1, phi2] = comparison_functions(eq);
  GPair ga = fixed_point_G(pair, GSide::A, cfg);
  GPair gb = fixed_point_G(pair, GSide::B, cfg);
  return LimitBundle{pair, std::move(eq), std::move(phi1), std::move(phi2),
                     std::move(ga), std::move(gb), cfg};
}

Complex LimitBundle::G_over_inf(int k, const Complex& z) const {
  const SzegoFn& g = k == 1 ? G.G1 : G.G2;
  return szego_eval(g, z) / Complex(g.value_at_inf);
}

Complex LimitBundle::Gstar_over_inf(int k, const Complex& z) const {
  const SzegoFn& g = k == 1 ? G_star.G1 : G_star.G2;
  return szego_eval(g, z) / Complex(g.value_at_inf);
}

Real LimitBundle::G_inf(int k) const {
  return k == 1 ? G.G1.value_at_inf : G.G2.value_at_inf;
}

Complex LimitBundle::phi_pow(int k, long n, const Complex& z) const {
  return pow_int(complex_phi(k == 1 ? phi1 : phi2, z), n);
}

Real LimitBundle::C_pow(int k, long n) const {
  return pow_int(k == 1 ? phi1.C : phi2.C, n);
}

Real LimitBundle::kappa_limit(int k) const {
  Real own = G_inf(k), other = G_inf(3 - k);
  return own / (sqrt(Real(2L) * const_pi()) * sqrt(other));
}

Real LimitBundle::asym_An1_rhs(const Complex& z) const {
  const Interval& iv2 = pair.sigma2.interval();
  Real root = abs(sqrt((z - Complex(iv2.b)) * (z - Complex(iv2.a))));
  return (G.G2.value_at_inf / G.G1.value_at_inf) *
         abs(szego_eval(G.G1, z)) / abs(szego_eval(G.G2, z)) / root;
}

Real LimitBundle::asym_An0_rhs(const Complex& z) const {
  // (1/pi) int (z-x)^{-1} d(eta_1) = 1/sqrt((z-a1)(z-b1)): the weak-star
  // mechanism equidistributes both the varying measure and denominator to
  // the arcsine average, so no extra weight survives
  const Interval& iv1 = pair.sigma1.interval();
  Real root = abs(exterior_root(iv1, z));
  return G.G1.value_at_inf / (abs(szego_eval(G.G1, z)) * root);
}

Real LimitBundle::cero_rhs(const Complex& z) const {
  const Interval& iv2 = pair.sigma2.interval();
  Real root = sqrt(abs(z - Complex(iv2.a)) * abs(z - Complex(iv2.b)));
  Real two_pi = Real(2L) * const_pi();
  return two_pi * abs(szego_eval(G.G1, z)) / (norm(szego_eval(G.G2, z)) * root);
}

Real LimitBundle::rate_factor(const Complex& z) const {
  Complex p1 = complex_phi(phi1, z);
  Complex p2 = complex_phi(phi2, z);
  return phi2.C * phi2.C * norm(p2) / abs(p1);
}

Real LimitBundle::decay_factor(const Complex& z) const {
  return Real(1L) / rate_factor(z);
}

Complex LimitBundle::anj_asymptote(int j, const Complex& z) const {
  Complex s;
  if (j == 1) {
    s = markov_transform(pair.sigma2, z, cfg);
  } else if (j == 0) {
    // s_{2,1}_hat(z) = int sigma1_hat(x) d(sigma2)(x) / (z - x)
    Measure::Rule r2 = pair.sigma2.rule(cfg.quad_order);
    s = Complex(Real(0L));
    for (size_t i = 0; i < r2.nodes.size(); ++i) {
      Real m1 = markov_transform(pair.sigma1, r2.nodes[i], cfg);
      s += Complex(r2.weights[i] * m1) / (z - Complex(r2.nodes[i]));
    }
  } else {
    throw NumericError("anj_asymptote: j must be 0 or 1");
  }
  return s * G_over_inf(2, z);
}

}  // namespace cbop
