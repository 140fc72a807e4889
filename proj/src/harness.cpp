#include "cbop/harness.hpp"

#include <json.hpp>

#include <sstream>

namespace cbop {

namespace {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// claim bookkeeping

Real rel_err(const Complex& got, const Complex& want) {
  if (!got.is_finite() || !want.is_finite()) return Real(1e30);  // fail loudly
  Real scale = max(abs(want), pow2(-60));
  return abs(got - want) / scale;
}

Real rel_err(const Real& got, const Real& want) {
  if (!got.is_finite() || !want.is_finite()) return Real(1e30);
  Real scale = max(abs(want), pow2(-60));
  return abs(got - want) / scale;
}

void finish_claim(ClaimCurve& c, const Real& claim_tol, const Real& fp_tol) {
  size_t m = c.errors.size();
  // least-squares slope of ln(err) over the last half
  size_t lo = m / 2;
  if (m - lo >= 2) {
    Real sx(0L), sy(0L), sxx(0L), sxy(0L), cnt(0L);
    for (size_t i = lo; i < m; ++i) {
      Real x(c.n_values[i]);
      Real y = log(max(c.errors[i], pow2(-1000)));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      cnt += Real(1L);
    }
    Real den = cnt * sxx - sx * sx;
    c.fitted_rate = den.is_zero() ? Real(0L) : (cnt * sxy - sx * sy) / den;
  } else {
    c.fitted_rate = Real(0L);
  }
  bool final_ok = !c.errors.empty() && c.errors.back() < claim_tol;
  bool trend_ok = true;
  if (m >= 3) {
    Real floor10 = Real(10L) * fp_tol;
    for (size_t i = m - 2; i < m; ++i) {
      bool nonincreasing = c.errors[i] <= c.errors[i - 1];
      bool below_floor = c.errors[i] < floor10 && c.errors[i - 1] < floor10;
      if (!nonincreasing && !below_floor) trend_ok = false;
    }
  }
  c.pass = final_ok && trend_ok;
  if (!c.pass)
    c.note = !final_ok ? "final error above claim tolerance" : "trend not nonincreasing";
}

std::vector<Complex> probes_for(const Interval& iv) {
  std::vector<Complex> ps = exterior_ring(iv, 2.5, 8);
  ps.push_back(Complex(iv.b + Real(1.75) * iv.half()));
  ps.push_back(Complex(iv.a - Real(1.75) * iv.half()));
  return ps;
}

// drop probes that sit on (or hug) a denominator zero: the Blaschke and
// remainder quotients are 0/0 there
std::vector<Complex> filter_w_zeros(std::vector<Complex> probes,
                                    const std::vector<Complex>& zeros, const Real& dist) {
  std::vector<Complex> out;
  for (const Complex& z : probes) {
    bool ok = true;
    for (const Complex& w : zeros)
      if (abs(z - w) < dist) { ok = false; break; }
    if (ok) out.push_back(z);
  }
  return out;
}

Real digits_tol(const PrecisionConfig& cfg) { return Real(10L) * cfg.fp_tol; }

// deterministic xorshift64; the seed is recorded in the report
struct SeededRng {
  uint64_t s;
  explicit SeededRng(uint64_t seed) : s(seed) {}
  double next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s >> 11) * (1.0 / 9007199254740992.0) - 0.5;
  }
};

constexpr uint64_t kAuditSeed = 0x2545F4914F6CDD1DULL;

// Per-n precision escalation: Gram conditioning grows geometrically in n,
// so a fixed mantissa eventually exhausts. Retry at doubled bits (twice)
// when the solve degenerates or the orthogonality residuals blow up.
template <typename F>
auto with_escalation(const PrecisionConfig& cfg, long& escalations, long& used_bits,
                     F&& make) -> decltype(make(cfg)) {
  PrecisionConfig c = cfg;
  for (int attempt = 0;; ++attempt) {
    used_bits = c.mantissa_bits;
    try {
      ScopedPrecision sp(c.mantissa_bits);
      auto out = make(c);
      if (out.resid_int3 < Real(1e6) * cfg.resid_tol() &&
          out.resid_int4 < Real(1e6) * cfg.resid_tol())
        return out;
      if (attempt >= 2) return out;
    } catch (const NumericError&) {
      if (attempt >= 2) throw;
    }
    c = PrecisionConfig::with_bits(2 * c.mantissa_bits, c.quad_order);
    ++escalations;
  }
}

BoundaryPair random_boundary_pair(const ChebGrid& g2dom, const ChebGrid& g1dom,
                                  SeededRng& rng) {
  auto table = [&rng](const ChebGrid& g) {
    std::vector<Real> a;
    for (int k = 0; k <= 8; ++k) a.push_back(Real(rng.next()));
    std::vector<Real> vals;
    vals.reserve(g.nodes.size());
    for (size_t j = 0; j < g.nodes.size(); ++j) {
      Real s(0L);
      for (int k = 0; k <= 8; ++k) s += a[k] * cos(Real(k) * g.theta[j]);
      vals.push_back(s);
    }
    return vals;
  };
  BoundaryPair p;
  p.grid_on_2 = g2dom;
  p.grid_on_1 = g1dom;
  p.ln_g1 = table(g2dom);
  p.ln_g2 = table(g1dom);
  return p;
}

Measure scaled_measure(const Measure& mu, const RealFn& factor, const std::string& tag) {
  RealFn base = [mu](const Real& x) { return mu.smooth(x); };
  return Measure::with_smooth(
      mu.interval(), mu.alpha(), mu.beta(),
      [base, factor](const Real& x) { return base(x) * factor(x); },
      mu.descriptor() + " * " + tag);
}

}  // namespace

std::vector<std::string> bundled_scenario_names() {
  return {"classical-szego", "varying-lebesgue", "cora-arcsine",
          "pade-chebyshev",  "pade-weighted",    "biortho-symmetric",
          "biortho-jacobi",  "fixed-point",      "crosschecks"};
}

Scenario bundled_scenario(const std::string& name, const PrecisionConfig& cfg) {
  ScopedPrecision sp(cfg.mantissa_bits);
  Scenario sc;
  sc.name = name;
  sc.cfg = cfg;
  sc.claim_tol = Real(1e-3);
  Interval unit(-1.0, 1.0);

  auto pow_family = [](const Real& t0) {
    VaryingMeasureSeq seq{Measure::lebesgue(Interval(-1.0, 1.0))};
    seq.w_zeros = [t0](long n) { return std::vector<Complex>(2 * n, Complex(t0)); };
    seq.phi = [t0](const Real& x) { return Real(1L) / ((t0 - x) * (t0 - x)); };
    seq.psi = [](const Real&) { return Real(1L); };
    return seq;
  };

  if (name == "classical-szego") {
    sc.seq = VaryingMeasureSeq{Measure::chebyshev(unit)};
    sc.field = FieldSource::point(Real(3L), Real(0L));
    sc.n_list = {2, 6, 10, 14, 18, 22, 26, 30};
  } else if (name == "varying-lebesgue") {
    sc.seq = pow_family(Real(3L));
    sc.field = FieldSource::point(Real(3L), Real(1L));
    sc.n_list = {5, 10, 15, 20, 25, 30};
    sc.jacobi_rate = true;
  } else if (name == "cora-arcsine") {
    Interval iv(3.0, 4.0);
    sc.seq = VaryingMeasureSeq{Measure::chebyshev(iv)};
    sc.tau_weighted = true;
    sc.tau = chebyshev_density(cheb_grid(iv, cfg));
    sc.n_list = {4, 8, 12, 16, 20};
  } else if (name == "pade-chebyshev") {
    sc.seq = VaryingMeasureSeq{Measure::chebyshev(unit)};
    sc.field = FieldSource::point(Real(3L), Real(0L));
    sc.pade_classical_rate = true;
    sc.n_list = {2, 4, 6, 8, 10, 12};
  } else if (name == "pade-weighted") {
    sc.seq = pow_family(Real(3L));
    sc.field = FieldSource::point(Real(3L), Real(1L));
    sc.n_list = {4, 8, 12, 16, 20};
    sc.jacobi_rate = true;
  } else if (name == "biortho-symmetric" || name == "fixed-point" || name == "crosschecks") {
    sc.pair = MeasurePair(Measure::lebesgue(Interval(-2.0, -1.0)),
                          Measure::lebesgue(Interval(1.0, 2.0)));
    sc.n_list = name == "biortho-symmetric" ? std::vector<long>{4, 8, 12, 16, 20, 24}
                                            : std::vector<long>{4, 8, 12, 16, 20};
  } else if (name == "biortho-jacobi") {
    sc.pair = MeasurePair(Measure::jacobi(Interval(-2.0, -1.0), Real(-0.5), Real(-0.5)),
                          Measure::jacobi(Interval(1.0, 2.0), Real(-0.5), Real(-0.5)));
    sc.n_list = {4, 8, 12, 16};
  } else {
    throw NumericError("unknown bundled scenario '" + name + "'");
  }
  return sc;
}

// ---------------------------------------------------------------------------
// varying-measure suite (strong asymptotics of q_n, tau_n, Q_n)

ConvergenceReport verify_varying(const Scenario& sc) {
  sc.cfg.validate();
  ScopedPrecision sp(sc.cfg.mantissa_bits);
  if (!sc.seq) throw NumericError("verify_varying: scenario lacks a varying family");
  const VaryingMeasureSeq& seq = *sc.seq;
  const Interval& iv = seq.mu.interval();
  const PrecisionConfig& cfg = sc.cfg;

  ConvergenceReport rep;
  rep.scenario = sc.name;

  // comparison function Phi and constant C
  ChebDensity lambda = [&] {
    if (sc.tau_weighted) return *sc.tau;
    WeightedEquilibrium we = weighted_equilibrium(iv, *sc.field, cfg);
    rep.diagnostics.emplace_back("equilibrium_residual", we.residual);
    return we.lambda;
  }();
  Real gamma = sc.tau_weighted ? Real(0L) : weighted_equilibrium(iv, *sc.field, cfg).gamma;
  ComparisonFn cf{lambda, exp(gamma)};

  SzegoFn G_mu = szego_from_measure(seq.mu, cfg);
  SzegoFn G_psimu = szego_from_measure(scaled_measure(seq.mu, seq.psi, "psi"), cfg);
  Real inv_sqrt_2pi = Real(1L) / sqrt(Real(2L) * const_pi());
  std::vector<Complex> probes = probes_for(iv);

  ClaimCurve c_qn{"qn_over_CnPhin_vs_G_psimu"};
  ClaimCurve c_tau{"taun_over_Cn_vs_Ginf"};
  ClaimCurve c_Qn{"Qn_over_Phin_vs_G_normalized"};
  ClaimCurve c_bl{"qn2_blaschke_vs_G2_mu"};
  Real worst_outer(0L), worst_cond_iv(0L);

  for (long n : sc.n_list) {
    Poly Q;
    Real tau_n;
    if (sc.tau_weighted) {
      Measure::Rule r = seq.mu.rule(cfg.quad_order);
      for (size_t j = 0; j < r.nodes.size(); ++j)
        r.weights[j] *= exp(Real(2 * n) * log_potential(lambda, r.nodes[j]));
      MonicOP m = monic_op_on_rule(r.nodes, r.weights, iv, n);
      Q = m.Q;
      tau_n = m.tau;
    } else {
      VaryingOP v = varying_op(seq, n, cfg);
      Q = v.Q;
      tau_n = v.tau;
      worst_cond_iv = max(worst_cond_iv, seq.condition_iv_residual(n, cfg));
    }
    Real Cn = pow_int(cf.C, n);

    std::vector<Complex> nprobes =
        sc.tau_weighted ? probes : filter_w_zeros(probes, seq.w_zeros(n), iv.half() / Real(4L));
    Real e_qn(0L), e_Qn(0L), e_bl(0L);
    for (const Complex& z : nprobes) {
      Complex phin = pow_int(complex_phi(cf, z), n);
      Complex qn = Complex(tau_n) * Q(z);
      Complex target_q = Complex(inv_sqrt_2pi) * szego_eval(G_psimu, z);
      e_qn = max(e_qn, rel_err(qn / (Complex(Cn) * phin), target_q));
      Complex target_Q = szego_eval(G_psimu, z) / Complex(G_psimu.value_at_inf);
      e_Qn = max(e_Qn, rel_err(Q(z) / phin, target_Q));
      if (!sc.tau_weighted) {
        BlaschkeProduct bp = seq.blaschke(n);
        Complex w(seq.w_scale(n));
        for (const Complex& zr : seq.w_zeros(n)) w *= (z - zr);
        Complex lhs = qn * qn * blaschke_eval(bp, z) / w;
        Complex rhs = szego_eval(G_mu, z) * szego_eval(G_mu, z) /
                      Complex(Real(2L) * const_pi());
        e_bl = max(e_bl, rel_err(lhs, rhs));
      }
    }
    c_qn.n_values.push_back(n);
    c_qn.errors.push_back(e_qn);
    c_Qn.n_values.push_back(n);
    c_Qn.errors.push_back(e_Qn);
    c_tau.n_values.push_back(n);
    c_tau.errors.push_back(rel_err(tau_n / Cn, inv_sqrt_2pi * G_psimu.value_at_inf));
    if (!sc.tau_weighted) {
      c_bl.n_values.push_back(n);
      c_bl.errors.push_back(e_bl);
      ComparisonData cmp{[&cf](const Complex& z) { return complex_phi(cf, z); }, cf.C,
                         seq.phi};
      OuterIdentityReport oir =
          outer_identity_check(seq.w_zeros(n), seq.w_scale(n), n, iv, cfg, &cmp);
      worst_outer = max(worst_outer, max(oir.max_resid_blaschke, oir.max_resid_comparison));
    }
  }

  Real gate = sc.jacobi_rate ? Real(5e-2) : sc.claim_tol;
  for (ClaimCurve* c : {&c_qn, &c_tau, &c_Qn}) {
    finish_claim(*c, gate, cfg.fp_tol);
    rep.claims.push_back(*c);
  }
  if (!sc.tau_weighted) {
    finish_claim(c_bl, gate, cfg.fp_tol);
    rep.claims.push_back(c_bl);
    rep.diagnostics.emplace_back("outer_identity_max_residual", worst_outer);
    rep.diagnostics.emplace_back("condition_iv_max_residual", worst_cond_iv);
    rep.checks.emplace_back("outer_identity_below_fp_tol", worst_outer < cfg.fp_tol);
    // condition iii) divergence diagnostic: the Blaschke sum grows linearly
    Real s1 = blaschke_divergence_term(seq.blaschke(sc.n_list.front()));
    Real s2 = blaschke_divergence_term(seq.blaschke(sc.n_list.back()));
    rep.checks.emplace_back("blaschke_divergence_grows", s2 > Real(2L) * s1);
  }
  rep.pass = true;
  for (const ClaimCurve& c : rep.claims) rep.pass = rep.pass && c.pass;
  for (auto& [_, ok] : rep.checks) rep.pass = rep.pass && ok;
  return rep;
}

// ---------------------------------------------------------------------------
// multipoint Pade suite

ConvergenceReport verify_pade(const Scenario& sc) {
  sc.cfg.validate();
  ScopedPrecision sp(sc.cfg.mantissa_bits);
  if (!sc.seq) throw NumericError("verify_pade: scenario lacks a varying family");
  const VaryingMeasureSeq& seq = *sc.seq;
  const Measure& mu = seq.mu;
  const Interval& iv = mu.interval();
  const PrecisionConfig& cfg = sc.cfg;

  ConvergenceReport rep;
  rep.scenario = sc.name;

  WeightedEquilibrium we = weighted_equilibrium(iv, *sc.field, cfg);
  ComparisonFn cf{we.lambda, exp(we.gamma)};
  SzegoFn G_mu = szego_from_measure(mu, cfg);
  SzegoFn G_psimu = szego_from_measure(scaled_measure(mu, seq.psi, "psi"), cfg);
  Real two_pi = Real(2L) * const_pi();
  std::vector<Complex> probes = probes_for(iv);

  probes = filter_w_zeros(probes, seq.w_zeros(sc.n_list.front()), iv.half() / Real(4L));

  ClaimCurve c_bl{"remainder_over_blaschke_vs_limit"};
  ClaimCurve c_w{"weighted_remainder_vs_limit"};
  Real worst_ident(0L);
  std::vector<std::vector<Real>> ln_rem(probes.size());

  for (long n : sc.n_list) {
    // the remainder mu_hat - R_n cancels ~ |B_2n| digits additively, and
    // the weighted Gram solve amplifies by the range of w_2n; build and
    // evaluate this n with proportional precision headroom
    PrecisionConfig build_cfg =
        PrecisionConfig::with_bits(cfg.mantissa_bits + 16 * n, cfg.quad_order);
    ScopedPrecision sp_n(build_cfg.mantissa_bits);
    PadeApproximant pa = multipoint_pade(mu, seq.w_zeros(n), seq.w_scale(n), n, build_cfg);
    Real e_bl(0L), e_w(0L);
    for (size_t pi_ = 0; pi_ < probes.size(); ++pi_) {
      const Complex& z = probes[pi_];
      Complex rem = pade_remainder(pa, mu, z, build_cfg);
      Complex ident = pade_remainder_integral(pa, mu, z, build_cfg);
      worst_ident = max(worst_ident, abs(rem - ident) / abs(ident));
      ln_rem[pi_].push_back(log(abs(rem)));

      Complex root = exterior_root(iv, z);
      BlaschkeProduct bp = seq.blaschke(n);
      Complex lim_bl = Complex(two_pi) /
                       (szego_eval(G_mu, z) * szego_eval(G_mu, z) * root);
      e_bl = max(e_bl, rel_err(rem / blaschke_eval(bp, z), lim_bl));

      Complex w(seq.w_scale(n));
      for (const Complex& zr : seq.w_zeros(n)) w *= (z - zr);
      Complex cphi = Complex(cf.C) * complex_phi(cf, z);
      Complex lim_w = Complex(two_pi) /
                      (szego_eval(G_psimu, z) * szego_eval(G_psimu, z) * root);
      e_w = max(e_w, rel_err(pow_int(cphi, 2 * n) * rem / w, lim_w));
    }
    c_bl.n_values.push_back(n);
    c_bl.errors.push_back(e_bl);
    c_w.n_values.push_back(n);
    c_w.errors.push_back(e_w);
  }

  Real gate = sc.jacobi_rate ? Real(5e-2) : sc.claim_tol;
  finish_claim(c_bl, gate, cfg.fp_tol);
  finish_claim(c_w, gate, cfg.fp_tol);
  rep.claims.push_back(c_bl);
  rep.claims.push_back(c_w);
  rep.diagnostics.emplace_back("remainder_identity_max_residual", worst_ident);
  rep.checks.emplace_back("remainder_identity_small", worst_ident < cfg.fp_tol);

  if (sc.pade_classical_rate) {
    // fitted slope of ln|remainder| vs n must match -2 ln|Psi(z)| within 2%
    Real worst_dev(0L);
    for (size_t pi_ = 0; pi_ < probes.size(); ++pi_) {
      Real sx(0L), sy(0L), sxx(0L), sxy(0L), cnt(0L);
      for (size_t i = 0; i < sc.n_list.size(); ++i) {
        Real x(sc.n_list[i]);
        Real y = ln_rem[pi_][i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        cnt += Real(1L);
      }
      Real slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
      Real target = Real(-2L) * log(abs(psi_map(iv, probes[pi_])));
      worst_dev = max(worst_dev, abs(slope - target) / abs(target));
    }
    rep.diagnostics.emplace_back("classical_rate_max_deviation", worst_dev);
    rep.checks.emplace_back("classical_rate_within_2pc", worst_dev < Real(0.02));
  }

  rep.pass = true;
  for (const ClaimCurve& c : rep.claims) rep.pass = rep.pass && c.pass;
  for (auto& [_, ok] : rep.checks) rep.pass = rep.pass && ok;
  return rep;
}

// ---------------------------------------------------------------------------
// biorthogonal / ML Hermite-Pade suite

ConvergenceReport verify_biortho(const Scenario& sc) {
  sc.cfg.validate();
  ScopedPrecision sp(sc.cfg.mantissa_bits);
  if (!sc.pair) throw NumericError("verify_biortho: scenario lacks a measure pair");
  const MeasurePair& pair = *sc.pair;
  const PrecisionConfig& cfg = sc.cfg;

  ConvergenceReport rep;
  rep.scenario = sc.name;

  LimitBundle lb = make_limit_bundle(pair, cfg);
  rep.diagnostics.emplace_back("equilibrium_residual",
                               max(lb.eq.residual1, lb.eq.residual2));
  rep.diagnostics.emplace_back("G_boundary_residual", lb.G.boundary_residual);
  rep.diagnostics.emplace_back("Gstar_boundary_residual", lb.G_star.boundary_residual);

  Real inv_sqrt_2pi = Real(1L) / sqrt(Real(2L) * const_pi());
  std::vector<Complex> probes1 = probes_for(pair.sigma1.interval());
  std::vector<Complex> probes2 = probes_for(pair.sigma2.interval());
  std::vector<Complex> joint = probes1;
  joint.insert(joint.end(), probes2.begin(), probes2.end());

  ClaimCurve c_q2{"Qn2_over_Phi2n_vs_G2"};
  ClaimCurve c_q1{"Qn1_over_Phi1n_vs_G1"};
  ClaimCurve c_k1{"kappa_n1_over_C1n_vs_G1inf"};
  ClaimCurve c_k2{"kappa_n2_over_C2n_vs_G2inf"};
  ClaimCurve c_p{"Pn_over_Phi1n_vs_G1star"};
  ClaimCurve c_a1{"An1_modulus_vs_asymptote"};
  ClaimCurve c_a0{"An0_modulus_vs_asymptote"};
  ClaimCurve c_anj0{"an0_over_Phi2n_vs_s21hat_G2"};
  ClaimCurve c_anj1{"an1_over_Phi2n_vs_s22hat_G2"};
  ClaimCurve c_cero{"cero_rate_product_vs_limit"};
  Real worst_mirror(0L);

  long escalations = 0;
  for (long n : sc.n_list) {
    // the forms cancel ~ C^{2n} digits internally: build and evaluate each
    // n with precision headroom proportional to n, then escalate further
    // if the orthogonality residuals still degrade
    PrecisionConfig build_cfg =
        PrecisionConfig::with_bits(cfg.mantissa_bits + 8 * n, cfg.quad_order);
    long bits_a = build_cfg.mantissa_bits, bits_b = build_cfg.mantissa_bits;
    HPSystem hp = with_escalation(
        build_cfg, escalations, bits_a,
        [&](const PrecisionConfig& c) { return hp_system(pair, n, c); });
    HPSystem hpb = with_escalation(
        build_cfg, escalations, bits_b,
        [&](const PrecisionConfig& c) { return hp_system_b(pair, n, c); });
    // the forms and the (cero) difference cancel ~ C^{2n} digits internally;
    // evaluate this n's claims with headroom for that loss
    ScopedPrecision sp_n(std::max(bits_a, bits_b));

    Real e_q2(0L), e_anj0(0L), e_anj1(0L), e_cero(0L);
    for (const Complex& z : probes2) {
      Complex phi2n = lb.phi_pow(2, n, z);
      e_q2 = max(e_q2, rel_err(hp.a2(z) / phi2n, lb.G_over_inf(2, z)));
      e_anj0 = max(e_anj0, rel_err(hp.a0(z) / phi2n, lb.anj_asymptote(0, z)));
      e_anj1 = max(e_anj1, rel_err(hp.a1(z) / phi2n, lb.anj_asymptote(1, z)));
    }
    Real e_q1(0L), e_p(0L), e_a0(0L);
    for (const Complex& z : probes1) {
      e_q1 = max(e_q1, rel_err(hp.Q1(z) / lb.phi_pow(1, n, z), lb.G_over_inf(1, z)));
      e_p = max(e_p, rel_err(hpb.a2(z) / lb.phi_pow(1, n, z), lb.Gstar_over_inf(1, z)));
      Real lhs0 = pow_int(hp.kappa1 * hp.kappa2, 2) * abs(hp.A0(z)) *
                  abs(lb.phi_pow(1, n, z));
      e_a0 = max(e_a0, rel_err(lhs0, lb.asym_An0_rhs(z)));
    }
    Real e_a1(0L);
    for (const Complex& z : joint) {
      Real lhs1 = hp.kappa2 * hp.kappa2 * abs(hp.A1(z)) *
                  abs(lb.phi_pow(2, n, z) / lb.phi_pow(1, n, z));
      e_a1 = max(e_a1, rel_err(lhs1, lb.asym_An1_rhs(z)));
      Complex diff = markov_transform(pair.sigma2, z, cfg) - hp.a1(z) / hp.a2(z);
      Real lhs_c = pow_int(lb.rate_factor(z), n) * abs(diff);
      e_cero = max(e_cero, rel_err(lhs_c, lb.cero_rhs(z)));
    }
    // mirror identity P_n(z) = (-1)^n Q_n(-z) for the symmetric pair
    if (pair.sigma1.interval().a == -pair.sigma2.interval().b &&
        pair.sigma1.interval().b == -pair.sigma2.interval().a) {
      for (const Complex& z : probes1) {
        Complex lhs = hpb.a2(z);
        Complex rhs = hp.a2(Complex(-z.re, -z.im));
        if (n % 2 == 1) rhs = -rhs;
        worst_mirror = max(worst_mirror, rel_err(lhs, rhs));
      }
    }

    c_q2.n_values.push_back(n); c_q2.errors.push_back(e_q2);
    c_q1.n_values.push_back(n); c_q1.errors.push_back(e_q1);
    c_p.n_values.push_back(n); c_p.errors.push_back(e_p);
    c_k1.n_values.push_back(n);
    c_k1.errors.push_back(rel_err(hp.kappa1 / lb.C_pow(1, n), lb.kappa_limit(1)));
    c_k2.n_values.push_back(n);
    c_k2.errors.push_back(rel_err(hp.kappa2 / lb.C_pow(2, n), lb.kappa_limit(2)));
    c_a1.n_values.push_back(n); c_a1.errors.push_back(e_a1);
    c_a0.n_values.push_back(n); c_a0.errors.push_back(e_a0);
    c_anj0.n_values.push_back(n); c_anj0.errors.push_back(e_anj0);
    c_anj1.n_values.push_back(n); c_anj1.errors.push_back(e_anj1);
    c_cero.n_values.push_back(n); c_cero.errors.push_back(e_cero);
  }

  // per-claim gates: the monic-polynomial claims carry the tight tolerance;
  // the form asymptotics get 1e-2; the kappa and (cero) products converge at
  // the intrinsic 1/n Jacobi-endpoint rate, so their gates are trend-driven
  // with loose caps (the acceptance suite applies the literal thresholds)
  Real form_tol(1e-2);
  for (ClaimCurve* c : {&c_q2, &c_q1, &c_p}) {
    finish_claim(*c, sc.claim_tol, cfg.fp_tol);
    rep.claims.push_back(*c);
  }
  for (ClaimCurve* c : {&c_k1, &c_k2, &c_a1, &c_a0, &c_anj0, &c_anj1}) {
    finish_claim(*c, form_tol, cfg.fp_tol);
    rep.claims.push_back(*c);
  }
  finish_claim(c_cero, Real(5e-2), cfg.fp_tol);
  rep.claims.push_back(c_cero);
  rep.diagnostics.emplace_back("mirror_identity_max_err", worst_mirror);
  rep.diagnostics.emplace_back("precision_escalations", Real(escalations));
  // decay factor < 1 everywhere on the Omega2 probes (maximum-principle bound)
  bool decay_ok = true;
  for (const Complex& z : joint) decay_ok = decay_ok && lb.decay_factor(z) < Real(1L);
  rep.checks.emplace_back("cero_decay_factor_below_1", decay_ok);

  rep.pass = true;
  for (const ClaimCurve& c : rep.claims) rep.pass = rep.pass && c.pass;
  for (auto& [_, ok] : rep.checks) rep.pass = rep.pass && ok;
  return rep;
}

// ---------------------------------------------------------------------------
// operator T suite

ConvergenceReport verify_fixed_point(const Scenario& sc) {
  sc.cfg.validate();
  ScopedPrecision sp(sc.cfg.mantissa_bits);
  if (!sc.pair) throw NumericError("verify_fixed_point: scenario lacks a measure pair");
  const MeasurePair& pair = *sc.pair;
  const PrecisionConfig& cfg = sc.cfg;

  ConvergenceReport rep;
  rep.scenario = sc.name;

  RealFn h = ml_limit_h(pair);
  TWeights w = make_T_weights(pair, &h, nullptr, cfg);

  // contraction audit over 20 seeded pairs
  SeededRng rng(kAuditSeed);
  Real worst_ratio(0L);
  for (int trial = 0; trial < 20; ++trial) {
    BoundaryPair p = random_boundary_pair(w.grid2, w.grid1, rng);
    BoundaryPair q = random_boundary_pair(w.grid2, w.grid1, rng);
    Real d0 = metric_d(p, q);
    Real d1 = metric_d(operator_T(p, w), operator_T(q, w));
    worst_ratio = max(worst_ratio, d1 / d0);
  }
  rep.diagnostics.emplace_back("contraction_audit_seed",
                               Real(std::to_string(kAuditSeed)));
  rep.diagnostics.emplace_back("contraction_max_ratio", worst_ratio);
  rep.checks.emplace_back("contraction_ratio_below_0.51", worst_ratio <= Real(0.51));

  // exact halving on constant pairs
  BoundaryPair one = constant_pair(w.grid2, w.grid1, Real(1L), Real(1L));
  BoundaryPair e = constant_pair(w.grid2, w.grid1, exp(Real(1L)), exp(Real(1L)));
  Real const_ratio = metric_d(operator_T(one, w), operator_T(e, w)) / metric_d(one, e);
  rep.diagnostics.emplace_back("constant_pair_ratio_minus_half",
                               abs(const_ratio - Real(0.5)));
  rep.checks.emplace_back("constant_pair_ratio_exact_half",
                          abs(const_ratio - Real(0.5)) < pow2(-64));

  // fixed points and their budgets
  GPair ga = fixed_point_G(pair, GSide::A, cfg);
  GPair gb = fixed_point_G(pair, GSide::B, cfg);
  long budget = static_cast<long>(cfg.mantissa_bits / 4) + 5;
  rep.diagnostics.emplace_back("G_iterations", Real(ga.iterations));
  rep.diagnostics.emplace_back("G_boundary_residual", ga.boundary_residual);
  rep.diagnostics.emplace_back("Gstar_boundary_residual", gb.boundary_residual);
  rep.checks.emplace_back("G_iterations_within_budget",
                          ga.iterations <= budget && gb.iterations <= budget);
  rep.checks.emplace_back("G_residual_below_10fp_tol",
                          ga.boundary_residual < digits_tol(cfg) &&
                              gb.boundary_residual < digits_tol(cfg));
  Real worst_trace(0L);
  for (size_t k = 1; k + 1 < ga.trace.size(); ++k)
    worst_trace = max(worst_trace, ga.trace[k + 1] / ga.trace[k]);
  rep.diagnostics.emplace_back("iteration_trace_max_ratio", worst_trace);
  rep.checks.emplace_back("iteration_trace_ratio_below_0.55", worst_trace <= Real(0.55));

  // prop2: polynomials orthonormal w.r.t. d(mu_k)/|Phi_k^{2n}|, run for a
  // Chebyshev-type reference pair (constant Szego functions, exact
  // constants) and for the scenario measures themselves
  EquilibriumPair eq = vector_equilibrium(pair.sigma1.interval(), pair.sigma2.interval(), cfg);
  auto [phi1, phi2] = comparison_functions(eq);
  Measure cheb1 = Measure::chebyshev(pair.sigma1.interval());
  Measure cheb2 = Measure::chebyshev(pair.sigma2.interval());
  SzegoFn G1c = szego_from_measure(cheb1, cfg);
  SzegoFn G2c = szego_from_measure(cheb2, cfg);
  SzegoFn G1m = szego_from_measure(pair.sigma1, cfg);
  SzegoFn G2m = szego_from_measure(pair.sigma2, cfg);
  Real inv_sqrt_2pi = Real(1L) / sqrt(Real(2L) * const_pi());
  std::vector<Complex> probes1 = probes_for(pair.sigma1.interval());
  std::vector<Complex> probes2 = probes_for(pair.sigma2.interval());

  ClaimCurve c_c1{"prop2_chebyshev_q1_exact_constant"};
  ClaimCurve c_c2{"prop2_chebyshev_q2_exact_constant"};
  ClaimCurve c_p1{"prop2_q1_over_Phi1n_vs_G_mu1"};
  ClaimCurve c_p2{"prop2_q2_over_Phi2n_vs_G_mu2"};
  ClaimCurve c_i1{"prop3_image_q1_vs_limit"};
  ClaimCurve c_i2{"prop3_image_q2_vs_limit"};

  // prop3 limits: G(f2^{-1} h sigma1), G(f1^{-1} sigma2)
  SzegoFn lim1 = szego_from_parts(
      pair.sigma1.interval(), pair.sigma1.exponent_b(), pair.sigma1.exponent_a(),
      [&](const Real& x) {
        Real f2 = szego_eval(G2m, x) / G2m.value_at_inf;
        return log(pair.sigma1.smooth(x) * h(x) / f2);
      },
      cfg);
  SzegoFn lim2 = szego_from_parts(
      pair.sigma2.interval(), pair.sigma2.exponent_b(), pair.sigma2.exponent_a(),
      [&](const Real& x) {
        Real f1 = szego_eval(G1m, x) / G1m.value_at_inf;
        return log(pair.sigma2.smooth(x) / f1);
      },
      cfg);

  for (long n : sc.n_list) {
    auto tilde = [&](const Measure& mk, const ComparisonFn& cfk, long deg) {
      Measure::Rule r = mk.rule(cfg.quad_order);
      for (size_t j = 0; j < r.nodes.size(); ++j)
        r.weights[j] *= exp(Real(2 * deg) * log_potential(cfk.lambda, r.nodes[j]));
      return monic_op_on_rule(r.nodes, r.weights, mk.interval(), deg);
    };
    MonicOP t1 = tilde(pair.sigma1, phi1, n);
    MonicOP t2 = tilde(pair.sigma2, phi2, n);
    MonicOP tc1 = tilde(cheb1, phi1, n);
    MonicOP tc2 = tilde(cheb2, phi2, n);

    Real ec1(0L), ec2(0L);
    for (const Complex& z : probes1) {
      Complex q = Complex(tc1.tau) * tc1.Q(z);
      Complex lim = Complex(inv_sqrt_2pi) * szego_eval(G1c, z);
      ec1 = max(ec1, rel_err(q / pow_int(complex_phi(phi1, z), n), lim));
    }
    for (const Complex& z : probes2) {
      Complex q = Complex(tc2.tau) * tc2.Q(z);
      Complex lim = Complex(inv_sqrt_2pi) * szego_eval(G2c, z);
      ec2 = max(ec2, rel_err(q / pow_int(complex_phi(phi2, z), n), lim));
    }
    c_c1.n_values.push_back(n); c_c1.errors.push_back(ec1);
    c_c2.n_values.push_back(n); c_c2.errors.push_back(ec2);

    Real e1(0L), e2(0L);
    for (const Complex& z : probes1) {
      Complex q = Complex(t1.tau) * t1.Q(z);
      Complex lim = Complex(inv_sqrt_2pi) * szego_eval(G1m, z);
      e1 = max(e1, rel_err(q / pow_int(complex_phi(phi1, z), n), lim));
    }
    for (const Complex& z : probes2) {
      Complex q = Complex(t2.tau) * t2.Q(z);
      Complex lim = Complex(inv_sqrt_2pi) * szego_eval(G2m, z);
      e2 = max(e2, rel_err(q / pow_int(complex_phi(phi2, z), n), lim));
    }
    c_p1.n_values.push_back(n); c_p1.errors.push_back(e1);
    c_p2.n_values.push_back(n); c_p2.errors.push_back(e2);

    // prop3: image of the prop2 pair under tilde_T_n with h_tilde = h
    auto [q1s, q2s] = tilde_T_n(t1.Q, t2.Q, h, pair, n, cfg);
    Measure::Rule r2 = pair.sigma2.rule(cfg.quad_order);
    Real k2inv2(0L);
    for (size_t j = 0; j < r2.nodes.size(); ++j) {
      Real v = q2s(r2.nodes[j]);
      k2inv2 += r2.weights[j] * v * v / abs(t1.Q(r2.nodes[j]));
    }
    Real kappa2s = Real(1L) / sqrt(k2inv2);
    Measure::Rule r1 = pair.sigma1.rule(cfg.quad_order);
    Real k1inv2(0L);
    for (size_t j = 0; j < r1.nodes.size(); ++j) {
      Real v = q1s(r1.nodes[j]);
      k1inv2 += r1.weights[j] * v * v * h(r1.nodes[j]) / abs(t2.Q(r1.nodes[j]));
    }
    Real kappa1s = Real(1L) / sqrt(k1inv2);

    Real ei1(0L), ei2(0L);
    for (const Complex& z : probes1) {
      Complex q = Complex(kappa1s) * q1s(z);
      Complex lim = Complex(inv_sqrt_2pi) * szego_eval(lim1, z);
      Complex denom = Complex(pow_int(phi1.C, n)) * pow_int(complex_phi(phi1, z), n);
      ei1 = max(ei1, rel_err(q / denom, lim));
    }
    for (const Complex& z : probes2) {
      Complex q = Complex(kappa2s) * q2s(z);
      Complex lim = Complex(inv_sqrt_2pi) * szego_eval(lim2, z);
      Complex denom = Complex(pow_int(phi2.C, n)) * pow_int(complex_phi(phi2, z), n);
      ei2 = max(ei2, rel_err(q / denom, lim));
    }
    c_i1.n_values.push_back(n); c_i1.errors.push_back(ei1);
    c_i2.n_values.push_back(n); c_i2.errors.push_back(ei2);
  }

  for (ClaimCurve* c : {&c_c1, &c_c2}) {
    finish_claim(*c, sc.claim_tol, cfg.fp_tol);
    rep.claims.push_back(*c);
  }
  // the sigma-weighted variants converge at the 1/n Jacobi-endpoint rate:
  // gate on the decreasing trend with a loose cap
  for (ClaimCurve* c : {&c_p1, &c_p2, &c_i1, &c_i2}) {
    finish_claim(*c, Real(5e-2), cfg.fp_tol);
    rep.claims.push_back(*c);
  }
  rep.pass = true;
  for (const ClaimCurve& c : rep.claims) rep.pass = rep.pass && c.pass;
  for (auto& [_, ok] : rep.checks) rep.pass = rep.pass && ok;
  return rep;
}

// ---------------------------------------------------------------------------
// cross-check suite: (otro), the h/ell limits, weak-star integrals

ConvergenceReport verify_crosschecks(const Scenario& sc) {
  sc.cfg.validate();
  ScopedPrecision sp(sc.cfg.mantissa_bits);
  if (!sc.pair) throw NumericError("verify_crosschecks: scenario lacks a measure pair");
  const MeasurePair& pair = *sc.pair;
  const PrecisionConfig& cfg = sc.cfg;
  const Interval& iv1 = pair.sigma1.interval();
  const Interval& iv2 = pair.sigma2.interval();

  ConvergenceReport rep;
  rep.scenario = sc.name;

  // (otro): comparison functions from the equilibrium potentials vs the
  // conformal-branch boundary-value solve
  EquilibriumPair eq = vector_equilibrium(iv1, iv2, cfg);
  auto [phi1, phi2] = comparison_functions(eq);
  ConformalBranches cb = conformal_branches(iv1, iv2, cfg);
  Interval hull(min(iv1.a, iv2.a), max(iv1.b, iv2.b));
  std::vector<Complex> probes = exterior_ring(hull, 1.6, 20);
  Real worst_otro(0L);
  for (const Complex& z : probes) {
    Complex f1 = conformal_F(cb, 1, z) / Complex(cb.f1_inf_deriv);
    Complex f2 = conformal_F(cb, 2, z) / Complex(cb.f2_inf_deriv);
    worst_otro = max(worst_otro, rel_err(f1, complex_phi(phi1, z)));
    worst_otro = max(worst_otro, rel_err(f2, complex_phi(phi2, z)));
  }
  Real c1 = cb.f1_inf_deriv / sqrt(cb.f2_inf_deriv);
  Real c2 = cb.f2_inf_deriv / sqrt(cb.f1_inf_deriv);
  Real worst_c = max(rel_err(c1, phi1.C), rel_err(c2, phi2.C));
  rep.diagnostics.emplace_back("otro_max_probe_error", worst_otro);
  rep.diagnostics.emplace_back("otro_constant_error", worst_c);
  rep.checks.emplace_back("otro_within_10fp_tol", worst_otro < digits_tol(cfg));
  rep.checks.emplace_back("otro_constants_within_10fp_tol", worst_c < digits_tol(cfg));

  // |h_{n,1}| -> h and |ell_{n,1}| -> ell sup errors
  RealFn h = ml_limit_h(pair);
  RealFn ell = ml_limit_ell(pair);
  ChebGrid g1 = cheb_grid(iv1, cfg), g2 = cheb_grid(iv2, cfg);
  ClaimCurve c_h{"h_n1_sup_error"};
  ClaimCurve c_l{"ell_n1_sup_error"};
  ClaimCurve c_ws{"weak_star_errors"};
  Real worst_g1_exact(0L);

  long escalations = 0;
  for (long n : sc.n_list) {
    // the forms cancel ~ C^{2n} digits internally: build and evaluate each
    // n with precision headroom proportional to n, then escalate further
    // if the orthogonality residuals still degrade
    PrecisionConfig build_cfg =
        PrecisionConfig::with_bits(cfg.mantissa_bits + 8 * n, cfg.quad_order);
    long bits_a = build_cfg.mantissa_bits, bits_b = build_cfg.mantissa_bits;
    HPSystem hp = with_escalation(
        build_cfg, escalations, bits_a,
        [&](const PrecisionConfig& c) { return hp_system(pair, n, c); });
    HPSystem hpb = with_escalation(
        build_cfg, escalations, bits_b,
        [&](const PrecisionConfig& c) { return hp_system_b(pair, n, c); });
    ScopedPrecision sp_n(std::max(bits_a, bits_b));
    Real eh(0L), el(0L);
    for (const Real& x : g1.nodes) eh = max(eh, abs(abs(hp.h1(x)) - h(x)));
    for (const Real& x : g2.nodes) el = max(el, abs(abs(hpb.h1(x)) - ell(x)));
    c_h.n_values.push_back(n);
    c_h.errors.push_back(eh);
    c_l.n_values.push_back(n);
    c_l.errors.push_back(el);

    // weak-star (int9): int g q_{n,2}^2 d(sigma2)/|Q_{n,1}| vs arcsine average
    Measure::Rule r2 = pair.sigma2.rule(cfg.quad_order);
    auto ws = [&](const RealFn& g) {
      Real s(0L);
      for (size_t j = 0; j < r2.nodes.size(); ++j) {
        Real q = hp.kappa2 * hp.a2(r2.nodes[j]);
        s += r2.weights[j] * g(r2.nodes[j]) * q * q / abs(hp.Q1(r2.nodes[j]));
      }
      return s;
    };
    RealFn g_one = [](const Real&) { return Real(1L); };
    RealFn g_lin = [](const Real& y) { return y; };
    RealFn g_rat = [](const Real& y) { return Real(1L) / (y + Real(3L)); };
    worst_g1_exact = max(worst_g1_exact, abs(ws(g_one) - Real(1L)));
    Real e_ws(0L);
    for (const RealFn* g : {&g_lin, &g_rat}) {
      Real target = quad_eta(*g, g2) / const_pi();
      e_ws = max(e_ws, rel_err(ws(*g), target));
    }
    c_ws.n_values.push_back(n);
    c_ws.errors.push_back(e_ws);
  }
  for (ClaimCurve* c : {&c_h, &c_l, &c_ws}) {
    finish_claim(*c, sc.claim_tol, cfg.fp_tol);
    rep.claims.push_back(*c);
  }
  rep.diagnostics.emplace_back("weak_star_g1_exactness", worst_g1_exact);
  rep.diagnostics.emplace_back("precision_escalations", Real(escalations));
  rep.checks.emplace_back("weak_star_g1_exact", worst_g1_exact < Real(100L) * cfg.resid_tol());

  rep.pass = true;
  for (const ClaimCurve& c : rep.claims) rep.pass = rep.pass && c.pass;
  for (auto& [_, ok] : rep.checks) rep.pass = rep.pass && ok;
  return rep;
}

ConvergenceReport run_suite(const std::string& name, const PrecisionConfig& cfg) {
  Scenario sc = bundled_scenario(name, cfg);
  if (name == "classical-szego" || name == "varying-lebesgue" || name == "cora-arcsine" ||
      name == "cora-semicircle")
    return verify_varying(sc);
  if (name == "pade-chebyshev" || name == "pade-weighted") return verify_pade(sc);
  if (name == "biortho-symmetric" || name == "biortho-jacobi") return verify_biortho(sc);
  if (name == "fixed-point") return verify_fixed_point(sc);
  if (name == "crosschecks") return verify_crosschecks(sc);
  throw NumericError("run_suite: unknown suite '" + name + "'");
}

// ---------------------------------------------------------------------------
// report serialization

int render_digits(const PrecisionConfig& cfg) {
  return static_cast<int>(static_cast<double>(cfg.mantissa_bits) * 0.3010299956639812) + 3;
}

std::string report_to_json(const ConvergenceReport& rep, const PrecisionConfig& cfg) {
  int d = render_digits(cfg);
  ordered_json j;
  j["scenario"] = rep.scenario;
  j["digits"] = d;
  j["pass"] = rep.pass;
  ordered_json claims = ordered_json::array();
  for (const ClaimCurve& c : rep.claims) {
    ordered_json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["fitted_rate"] = to_string(c.fitted_rate, 8);
    if (!c.note.empty()) jc["note"] = c.note;
    ordered_json pts = ordered_json::array();
    for (size_t i = 0; i < c.errors.size(); ++i)
      pts.push_back({{"n", c.n_values[i]}, {"error", to_string(c.errors[i], d)}});
    jc["errors"] = pts;
    claims.push_back(jc);
  }
  j["claims"] = claims;
  ordered_json diag = ordered_json::object();
  for (auto& [k, v] : rep.diagnostics) diag[k] = to_string(v, d);
  j["diagnostics"] = diag;
  ordered_json checks = ordered_json::object();
  for (auto& [k, v] : rep.checks) checks[k] = v;
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const ConvergenceReport& rep, const PrecisionConfig& cfg) {
  int d = render_digits(cfg);
  std::ostringstream os;
  os << "scenario,claim,n,error\n";
  for (const ClaimCurve& c : rep.claims)
    for (size_t i = 0; i < c.errors.size(); ++i)
      os << rep.scenario << "," << c.name << "," << c.n_values[i] << ","
         << to_string(c.errors[i], d) << "\n";
  return os.str();
}

}  // namespace cbop
