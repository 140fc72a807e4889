#include "cbop/biortho.hpp"

namespace cbop {

namespace {

void check_cap(long n, const PrecisionConfig& cfg, const char* who) {
  if (4 * n > cfg.quad_order)
    throw NumericError(std::string(who) +
                       ": n exceeds quad_order/4; rerun with a larger quad order");
}

std::vector<Real> cheb_values(const Interval& iv, const Real& x, long n) {
  Real t = (x - iv.mid()) / iv.half();
  std::vector<Real> T(n + 1);
  T[0] = Real(1L);
  if (n >= 1) T[1] = t;
  for (long k = 2; k <= n; ++k) T[k] = Real(2L) * t * T[k - 1] - T[k - 2];
  return T;
}

Poly monic_cheb(const Interval& iv, long n) {
  if (n == 0) return poly_constant(iv, Real(1L));
  std::vector<Real> c(n + 1, Real(0L));
  c[n] = pow_int(iv.half(), n) / pow2(n - 1);
  return Poly{iv, std::move(c)};
}

CauchyKernelGram cauchy_gram_core(const Measure& s1, const Measure& s2, long n,
                                  const PrecisionConfig& cfg) {
  CauchyKernelGram g{s1.interval(), s2.interval(), n, {}};
  Measure::Rule r1 = s1.rule(cfg.quad_order);
  Measure::Rule r2 = s2.rule(cfg.quad_order);
  size_t m1 = r1.nodes.size(), m2 = r2.nodes.size();
  std::vector<std::vector<Real>> ty(m2);
  for (size_t b = 0; b < m2; ++b) ty[b] = cheb_values(g.iv2, r2.nodes[b], n);
  g.entries.assign(n + 1, std::vector<Real>(n + 1, Real(0L)));
  for (size_t a = 0; a < m1; ++a) {
    std::vector<Real> row(n + 1, Real(0L));
    for (size_t b = 0; b < m2; ++b) {
      Real k = r2.weights[b] / (r1.nodes[a] - r2.nodes[b]);
      for (long j = 0; j <= n; ++j) row[j] += k * ty[b][j];
    }
    std::vector<Real> tx = cheb_values(g.iv1, r1.nodes[a], n);
    for (long i = 0; i <= n; ++i) {
      Real f = r1.weights[a] * tx[i];
      for (long j = 0; j <= n; ++j) g.entries[i][j] += f * row[j];
    }
  }
  return g;
}

// monic Q_n coefficients (second-interval basis): sum_k q_k I[nu][k] = 0
std::vector<Real> solve_q_side(const CauchyKernelGram& g, long n, const Interval& iv2) {
  if (n == 0) return {Real(1L)};
  Real cn = pow_int(iv2.half(), n) / pow2(n - 1);
  std::vector<std::vector<Real>> A(n, std::vector<Real>(n));
  std::vector<Real> rhs(n);
  for (long v = 0; v < n; ++v) {
    for (long k = 0; k < n; ++k) A[v][k] = g.entries[v][k];
    rhs[v] = -g.entries[v][n] * cn;
  }
  std::vector<Real> c = lin_solve(std::move(A), std::move(rhs));
  c.push_back(cn);
  return c;
}

std::vector<Real> solve_p_side(const CauchyKernelGram& g, long n, const Interval& iv1) {
  if (n == 0) return {Real(1L)};
  Real cn = pow_int(iv1.half(), n) / pow2(n - 1);
  std::vector<std::vector<Real>> A(n, std::vector<Real>(n));
  std::vector<Real> rhs(n);
  for (long v = 0; v < n; ++v) {
    for (long k = 0; k < n; ++k) A[v][k] = g.entries[k][v];
    rhs[v] = -g.entries[n][v] * cn;
  }
  std::vector<Real> c = lin_solve(std::move(A), std::move(rhs));
  c.push_back(cn);
  return c;
}

Real pairing(const CauchyKernelGram& g, const std::vector<Real>& p,
             const std::vector<Real>& q) {
  Real s(0L);
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i].is_zero()) continue;
    Real row(0L);
    for (size_t j = 0; j < q.size(); ++j) row += g.entries[i][j] * q[j];
    s += p[i] * row;
  }
  return s;
}

// Everything downstream of a2 for the Nikishin system N(sa, sb): the form
// A1 and its zeros (Q1), the constructive a1/a0 polynomials, H and the
// kappa normalizations, and the orthogonality residuals.
HPSystem hp_from_a2(const Measure& sa, const Measure& sb, Poly a2, long n,
                    const PrecisionConfig& cfg) {
  HPSystem sys;
  sys.n = n;
  sys.a2 = std::move(a2);
  const Interval& iv_a = sa.interval();
  const Interval& iv_b = sb.interval();
  Measure::Rule rb = sb.rule(cfg.quad_order);
  Measure::Rule ra = sa.rule(cfg.quad_order);

  std::vector<Real> a2_at_b(rb.nodes.size());
  for (size_t j = 0; j < rb.nodes.size(); ++j) a2_at_b[j] = sys.a2(rb.nodes[j]);

  sys.A1 = [rb, a2_at_b, iv_b](const Complex& z) {
    if (z.im.is_zero() && iv_b.contains(z.re))
      throw NumericError("HPSystem::A1: z on Delta_b");
    Complex s(Real(0L));
    for (size_t j = 0; j < rb.nodes.size(); ++j)
      s += Complex(rb.weights[j] * a2_at_b[j]) / (z - Complex(rb.nodes[j]));
    return s;
  };

  if (n == 0) {
    sys.Q1 = poly_constant(iv_a, Real(1L));
    sys.a1 = poly_constant(iv_b, Real(0L));
    sys.a0 = poly_constant(iv_b, Real(0L));
  } else {
    RealFn f = [&rb, &a2_at_b](const Real& x) {
      Real s(0L);
      for (size_t j = 0; j < rb.nodes.size(); ++j)
        s += rb.weights[j] * a2_at_b[j] / (x - rb.nodes[j]);
      return s;
    };
    RealFn df = [&rb, &a2_at_b](const Real& x) {
      Real s(0L);
      for (size_t j = 0; j < rb.nodes.size(); ++j) {
        Real d = x - rb.nodes[j];
        s -= rb.weights[j] * a2_at_b[j] / (d * d);
      }
      return s;
    };
    sys.Q1_zeros = real_zeros_bracketed(f, df, iv_a, n, cfg);
    sys.Q1 = poly_from_roots(iv_a, sys.Q1_zeros);
    sys.a2_zeros = poly_real_zeros(sys.a2, n, cfg);

    std::vector<Real> acc(n, Real(0L));
    for (size_t j = 0; j < rb.nodes.size(); ++j) {
      Poly dd = poly_divided_difference(sys.a2, rb.nodes[j]);
      for (long k = 0; k < n; ++k) acc[k] += rb.weights[j] * dd.coeffs[k];
    }
    sys.a1 = Poly{iv_b, std::move(acc)};

    std::vector<Real> sbhat_at_a(ra.nodes.size());
    for (size_t i = 0; i < ra.nodes.size(); ++i) {
      Real s(0L);
      for (size_t j = 0; j < rb.nodes.size(); ++j)
        s += rb.weights[j] / (ra.nodes[i] - rb.nodes[j]);
      sbhat_at_a[i] = s;
    }
    std::vector<Real> acc0(n, Real(0L));
    for (size_t i = 0; i < ra.nodes.size(); ++i) {
      if (sys.a1.degree() >= 1) {
        Poly d1 = poly_divided_difference(sys.a1, ra.nodes[i]);
        for (long k = 0; k <= d1.degree() && k < n; ++k)
          acc0[k] += ra.weights[i] * d1.coeffs[k];
      }
      Poly d2 = poly_divided_difference(sys.a2, ra.nodes[i]);
      Real f2 = ra.weights[i] * sbhat_at_a[i];
      for (long k = 0; k <= d2.degree() && k < n; ++k) acc0[k] -= f2 * d2.coeffs[k];
    }
    sys.a0 = Poly{iv_b, std::move(acc0)};
  }

  std::vector<Real> q1_at_b(rb.nodes.size());
  for (size_t j = 0; j < rb.nodes.size(); ++j) q1_at_b[j] = sys.Q1(rb.nodes[j]);
  auto H = [rb, a2_at_b, q1_at_b](const Real& t) {
    Real s(0L);
    for (size_t j = 0; j < rb.nodes.size(); ++j)
      s += rb.weights[j] * a2_at_b[j] * a2_at_b[j] / (q1_at_b[j] * (t - rb.nodes[j]));
    return s;
  };

  Real k2inv2(0L);
  for (size_t j = 0; j < rb.nodes.size(); ++j)
    k2inv2 += rb.weights[j] * a2_at_b[j] * a2_at_b[j] / abs(q1_at_b[j]);
  sys.kappa2 = Real(1L) / sqrt(k2inv2);
  Real k12inv2(0L);
  for (size_t i = 0; i < ra.nodes.size(); ++i) {
    Real q1 = sys.Q1(ra.nodes[i]);
    k12inv2 += ra.weights[i] * q1 * q1 * abs(H(ra.nodes[i])) / abs(sys.a2(ra.nodes[i]));
  }
  sys.kappa1 = Real(1L) / (sys.kappa2 * sqrt(k12inv2));

  Real kappa2_sq = sys.kappa2 * sys.kappa2;
  sys.h1 = [H, kappa2_sq](const Real& t) { return kappa2_sq * H(t); };

  std::vector<Real> A1_at_a(ra.nodes.size());
  for (size_t i = 0; i < ra.nodes.size(); ++i) A1_at_a[i] = sys.A1(Complex(ra.nodes[i])).re;
  sys.A0 = [ra, A1_at_a, iv_a](const Complex& z) {
    if (z.im.is_zero() && iv_a.contains(z.re))
      throw NumericError("HPSystem::A0: z on Delta_a");
    Complex s(Real(0L));
    for (size_t i = 0; i < ra.nodes.size(); ++i)
      s += Complex(ra.weights[i] * A1_at_a[i]) / (z - Complex(ra.nodes[i]));
    return s;
  };

  // orthogonality residuals of (int3), (int4), relative scale = sum |terms|
  sys.resid_int3 = Real(0L);
  sys.resid_int4 = Real(0L);
  if (n > 0) {
    std::vector<std::vector<Real>> Tb(rb.nodes.size()), Ta(ra.nodes.size());
    for (size_t j = 0; j < rb.nodes.size(); ++j)
      Tb[j] = cheb_values(iv_b, rb.nodes[j], n - 1);
    for (size_t i = 0; i < ra.nodes.size(); ++i)
      Ta[i] = cheb_values(iv_a, ra.nodes[i], n - 1);
    std::vector<Real> h_at_a(ra.nodes.size());
    for (size_t i = 0; i < ra.nodes.size(); ++i) h_at_a[i] = H(ra.nodes[i]);
    for (long v = 0; v < n; ++v) {
      Real dot(0L), scale(0L);
      for (size_t j = 0; j < rb.nodes.size(); ++j) {
        Real term = rb.weights[j] * Tb[j][v] * a2_at_b[j] / q1_at_b[j];
        dot += term;
        scale += abs(term);
      }
      sys.resid_int3 = max(sys.resid_int3, abs(dot) / scale);
      Real dot4(0L), scale4(0L);
      for (size_t i = 0; i < ra.nodes.size(); ++i) {
        Real term = ra.weights[i] * Ta[i][v] * sys.Q1(ra.nodes[i]) * h_at_a[i] /
                    sys.a2(ra.nodes[i]);
        dot4 += term;
        scale4 += abs(term);
      }
      sys.resid_int4 = max(sys.resid_int4, abs(dot4) / scale4);
    }
  }
  return sys;
}

}  // namespace

CauchyKernelGram cauchy_gram(const MeasurePair& pair, long n, const PrecisionConfig& cfg) {
  cfg.validate();
  check_cap(n, cfg, "cauchy_gram");
  ScopedPrecision sp(cfg.mantissa_bits);
  return cauchy_gram_core(pair.sigma1, pair.sigma2, n, cfg);
}

BiorthoPair biorthogonal_pair(const MeasurePair& pair, long n, const PrecisionConfig& cfg) {
  cfg.validate();
  check_cap(n, cfg, "biorthogonal_pair");
  ScopedPrecision sp(cfg.mantissa_bits);
  CauchyKernelGram g = cauchy_gram_core(pair.sigma1, pair.sigma2, n, cfg);
  BiorthoPair bp;
  bp.n = n;
  bp.P = Poly{pair.sigma1.interval(), solve_p_side(g, n, pair.sigma1.interval())};
  bp.Q = Poly{pair.sigma2.interval(), solve_q_side(g, n, pair.sigma2.interval())};
  bp.C = pairing(g, bp.P.coeffs, bp.Q.coeffs);
  if (bp.C.is_zero()) throw NumericError("biorthogonal_pair: diagonal pairing vanished");
  return bp;
}

std::vector<std::vector<Real>> biortho_pairing_matrix(const MeasurePair& pair, long n,
                                                      const PrecisionConfig& cfg) {
  cfg.validate();
  check_cap(n, cfg, "biortho_pairing_matrix");
  ScopedPrecision sp(cfg.mantissa_bits);
  CauchyKernelGram g = cauchy_gram_core(pair.sigma1, pair.sigma2, n, cfg);
  std::vector<std::vector<Real>> ps, qs;
  for (long m = 0; m <= n; ++m) {
    ps.push_back(solve_p_side(g, m, pair.sigma1.interval()));
    qs.push_back(solve_q_side(g, m, pair.sigma2.interval()));
  }
  std::vector<std::vector<Real>> out(n + 1, std::vector<Real>(n + 1, Real(0L)));
  for (long i = 0; i <= n; ++i)
    for (long j = 0; j <= n; ++j) out[i][j] = pairing(g, ps[i], qs[j]);
  return out;
}

HPSystem hp_system(const MeasurePair& pair, long n, const PrecisionConfig& cfg) {
  cfg.validate();
  check_cap(n, cfg, "hp_system");
  ScopedPrecision sp(cfg.mantissa_bits);
  CauchyKernelGram g = cauchy_gram_core(pair.sigma1, pair.sigma2, n, cfg);
  Poly a2{pair.sigma2.interval(), solve_q_side(g, n, pair.sigma2.interval())};
  return hp_from_a2(pair.sigma1, pair.sigma2, std::move(a2), n, cfg);
}

HPSystem hp_system_b(const MeasurePair& pair, long n, const PrecisionConfig& cfg) {
  cfg.validate();
  check_cap(n, cfg, "hp_system_b");
  ScopedPrecision sp(cfg.mantissa_bits);
  CauchyKernelGram g = cauchy_gram_core(pair.sigma2, pair.sigma1, n, cfg);
  Poly b2{pair.sigma1.interval(), solve_q_side(g, n, pair.sigma1.interval())};
  return hp_from_a2(pair.sigma2, pair.sigma1, std::move(b2), n, cfg);
}

Complex form_A1_linear(const HPSystem& sys, const MeasurePair& pair, const Complex& z,
                       const PrecisionConfig& cfg) {
  Complex s22 = markov_transform(pair.sigma2, z, cfg);
  return sys.a2(z) * s22 - sys.a1(z);
}

Complex form_A0_linear(const HPSystem& sys, const MeasurePair& pair, const Complex& z,
                       const PrecisionConfig& cfg) {
  Complex s11 = markov_transform(pair.sigma1, z, cfg);
  Measure::Rule r1 = pair.sigma1.rule(cfg.quad_order);
  Complex s12(Real(0L));
  for (size_t i = 0; i < r1.nodes.size(); ++i) {
    Real m2 = markov_transform(pair.sigma2, r1.nodes[i], cfg);
    s12 += Complex(r1.weights[i] * m2) / (z - Complex(r1.nodes[i]));
  }
  return sys.a0(z) - sys.a1(z) * s11 + sys.a2(z) * s12;
}

std::pair<Poly, Poly> tilde_T_n(const Poly& hatQ1, const Poly& hatQ2, const RealFn& h_tilde,
                                const MeasurePair& pair, long n, const PrecisionConfig& cfg) {
  cfg.validate();
  check_cap(n, cfg, "tilde_T_n");
  ScopedPrecision sp(cfg.mantissa_bits);
  const Interval& iv1 = pair.sigma1.interval();
  const Interval& iv2 = pair.sigma2.interval();

  Measure::Rule r2 = pair.sigma2.rule(cfg.quad_order);
  std::vector<Real> w2 = r2.weights;
  for (size_t j = 0; j < r2.nodes.size(); ++j) {
    Real q = abs(hatQ1(r2.nodes[j]));
    if (q.is_zero()) throw NumericError("tilde_T_n: hatQ1 vanishes on Delta2");
    w2[j] /= q;
  }
  Poly Q2s = monic_op_on_rule(r2.nodes, w2, iv2, n).Q;

  Measure::Rule r1 = pair.sigma1.rule(cfg.quad_order);
  std::vector<Real> w1 = r1.weights;
  for (size_t i = 0; i < r1.nodes.size(); ++i) {
    Real q = abs(hatQ2(r1.nodes[i]));
    if (q.is_zero()) throw NumericError("tilde_T_n: hatQ2 vanishes on Delta1");
    w1[i] *= h_tilde(r1.nodes[i]) / q;
  }
  Poly Q1s = monic_op_on_rule(r1.nodes, w1, iv1, n).Q;
  return {std::move(Q1s), std::move(Q2s)};
}

HPFixedPoint hp_fixed_point_route(const MeasurePair& pair, long n,
                                  const PrecisionConfig& cfg) {
  cfg.validate();
  check_cap(n, cfg, "hp_fixed_point_route");
  ScopedPrecision sp(cfg.mantissa_bits);
  Measure::Rule r2 = pair.sigma2.rule(cfg.quad_order);

  Poly Q1 = monic_cheb(pair.sigma1.interval(), n);
  Poly Q2 = monic_cheb(pair.sigma2.interval(), n);
  HPFixedPoint out;
  std::vector<Real> z1 = n == 0 ? std::vector<Real>{} : poly_real_zeros(Q1, n, cfg);
  std::vector<Real> z2 = n == 0 ? std::vector<Real>{} : poly_real_zeros(Q2, n, cfg);
  // iterate well past fp_tol: route equivalence with the direct system is
  // promised at the resid_tol scale, and the sweep contracts fast
  Real deep_tol = cfg.resid_tol() / Real(16L);
  long it = 0;
  for (;; ++it) {
    if (it >= cfg.max_iter)
      throw NumericError(
          "hp_fixed_point_route: no convergence in max_iter (direct route remains the "
          "oracle); last step " +
          (out.trace.empty() ? std::string("n/a") : to_string(out.trace.back(), 8)));
    // h_tilde = kappa2^2 |H| from the current pair (the (hn1) sweep)
    std::vector<Real> q2_at_b(r2.nodes.size()), q1_at_b(r2.nodes.size());
    for (size_t j = 0; j < r2.nodes.size(); ++j) {
      q2_at_b[j] = Q2(r2.nodes[j]);
      q1_at_b[j] = Q1(r2.nodes[j]);
    }
    Real k2inv2(0L);
    for (size_t j = 0; j < r2.nodes.size(); ++j)
      k2inv2 += r2.weights[j] * q2_at_b[j] * q2_at_b[j] / abs(q1_at_b[j]);
    Real k2sq = Real(1L) / k2inv2;
    RealFn h_tilde = [&](const Real& t) {
      Real s(0L);
      for (size_t j = 0; j < r2.nodes.size(); ++j)
        s += r2.weights[j] * q2_at_b[j] * q2_at_b[j] / (q1_at_b[j] * (t - r2.nodes[j]));
      return k2sq * abs(s);
    };
    auto [Q1n, Q2n] = tilde_T_n(Q1, Q2, h_tilde, pair, n, cfg);
    std::vector<Real> z1n = n == 0 ? std::vector<Real>{} : poly_real_zeros(Q1n, n, cfg);
    std::vector<Real> z2n = n == 0 ? std::vector<Real>{} : poly_real_zeros(Q2n, n, cfg);
    Real step(0L);
    for (long k = 0; k < n; ++k) {
      step = max(step, abs(z1n[k] - z1[k]));
      step = max(step, abs(z2n[k] - z2[k]));
    }
    Q1 = std::move(Q1n);
    Q2 = std::move(Q2n);
    z1 = std::move(z1n);
    z2 = std::move(z2n);
    bool plateau = out.trace.size() >= 1 && step > out.trace.back() / Real(2L) &&
                   step < Real(16L) * cfg.resid_tol();
    out.trace.push_back(step);
    if (n == 0 || step < deep_tol || plateau) break;
  }
  out.iterations = it + 1;
  // assemble the dependent objects around the converged a2 = Q2
  out.sys = hp_from_a2(pair.sigma1, pair.sigma2, std::move(Q2), n, cfg);
  return out;
}

}  // namespace cbop
