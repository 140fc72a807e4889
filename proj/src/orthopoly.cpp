#include "cbop/orthopoly.hpp"

namespace cbop {

Real Poly::operator()(const Real& x) const {
  Real t = (x - interval.mid()) / interval.half();
  return cheb_clenshaw(coeffs, t);
}

Complex Poly::operator()(const Complex& z) const {
  Complex t = (z - Complex(interval.mid())) / Complex(interval.half());
  return cheb_clenshaw(coeffs, t);
}

Real Poly::leading_coeff() const {
  long n = degree();
  if (n <= 0) return coeffs.empty() ? Real(0L) : coeffs[0];
  // T_n has monomial leading coefficient 2^{n-1} in t; t = (x-mid)/half
  return coeffs[n] * pow2(n - 1) / pow_int(interval.half(), n);
}

bool Poly::is_monic(const Real& tol) const {
  return abs(leading_coeff() - Real(1L)) < tol;
}

Poly poly_constant(const Interval& iv, Real c) { return Poly{iv, {std::move(c)}}; }

Poly poly_mul_linear(const Poly& p, const Real& r) {
  // (x - r) p = (mid - r) p + half * (t p); t T_k = (T_{k+1} + T_{|k-1|})/2
  long n = p.degree();
  Poly out{p.interval, std::vector<Real>(n + 2, Real(0L))};
  Real c0 = p.interval.mid() - r, half = p.interval.half();
  for (long k = 0; k <= n; ++k) {
    out.coeffs[k] += c0 * p.coeffs[k];
    Real h = half * p.coeffs[k] / Real(2L);
    out.coeffs[k + 1] += h;
    out.coeffs[k >= 1 ? k - 1 : 1] += h;
  }
  return out;
}

Poly poly_from_roots(const Interval& iv, const std::vector<Real>& roots) {
  Poly p = poly_constant(iv, Real(1L));
  for (const Real& r : roots) p = poly_mul_linear(p, r);
  return p;
}

Poly poly_mul(const Poly& p, const Poly& q) {
  Poly r{p.interval, std::vector<Real>(p.degree() + q.degree() + 1, Real(0L))};
  for (long i = 0; i <= p.degree(); ++i) {
    if (p.coeffs[i].is_zero()) continue;
    for (long j = 0; j <= q.degree(); ++j) {
      Real h = p.coeffs[i] * q.coeffs[j] / Real(2L);
      r.coeffs[i + j] += h;
      r.coeffs[i >= j ? i - j : j - i] += h;
    }
  }
  return r;
}

Poly poly_derivative(const Poly& p) {
  long n = p.degree();
  if (n <= 0) return poly_constant(p.interval, Real(0L));
  std::vector<Real> b(n + 2, Real(0L));
  for (long k = n; k >= 1; --k)
    b[k - 1] = (k + 1 <= n ? b[k + 1] : Real(0L)) + Real(2 * k) * p.coeffs[k];
  b[0] /= Real(2L);
  b.resize(n);
  for (Real& c : b) c /= p.interval.half();
  return Poly{p.interval, std::move(b)};
}

Poly poly_scale(const Poly& p, const Real& s) {
  Poly r = p;
  for (Real& c : r.coeffs) c *= s;
  return r;
}

Poly poly_make_monic(const Poly& p) {
  Real lc = p.leading_coeff();
  if (lc.is_zero()) throw NumericError("poly_make_monic: zero leading coefficient");
  return poly_scale(p, Real(1L) / lc);
}

Poly poly_interpolate(const ChebGrid& grid, const std::vector<Real>& values, long degree) {
  std::vector<Real> c = cheb_coeffs(values, grid);
  c.resize(degree + 1);
  return Poly{grid.interval, std::move(c)};
}

Real poly_coeff_distance(const Poly& p, const Poly& q) {
  // re-expand q on p's interval by sampling
  long deg = std::max(p.degree(), q.degree());
  ChebGrid g = cheb_grid(p.interval, std::max<long>(deg + 1, 8));
  std::vector<Real> vals;
  vals.reserve(g.nodes.size());
  for (const Real& x : g.nodes) vals.push_back(q(x));
  Poly qq = poly_interpolate(g, vals, deg);
  Real m(0L);
  for (long k = 0; k <= deg; ++k) {
    Real a = k <= p.degree() ? p.coeffs[k] : Real(0L);
    Real b = k <= qq.degree() ? qq.coeffs[k] : Real(0L);
    m = max(m, abs(a - b));
  }
  return m;
}

Poly poly_divided_difference(const Poly& p, const Real& x) {
  // backward recurrence matching T_j coefficients of (s-u) q(s) = p(s)-p(u):
  //   j = m:        b_{m-1} = 2 a_m
  //   2 <= j < m:   b_{j-1} = 2 a_j + 2u b_j - b_{j+1}
  //   j = 1:        b_0     = a_1 + u b_1 - b_2 / 2
  // (terms with out-of-range indices are zero; the j = 1 row differs
  // because s T_0 = T_1 enters without the 1/2)
  long m = p.degree();
  if (m <= 0) return poly_constant(p.interval, Real(0L));
  Real u = (x - p.interval.mid()) / p.interval.half();
  const std::vector<Real>& a = p.coeffs;
  std::vector<Real> b(m, Real(0L));
  b[m - 1] = Real(2L) * a[m];
  for (long j = m - 1; j >= 2; --j) {
    b[j - 1] = Real(2L) * a[j] + Real(2L) * u * b[j];
    if (j + 1 <= m - 1) b[j - 1] -= b[j + 1];
  }
  if (m >= 2) {
    b[0] = a[1] + u * b[1];
    if (m >= 3) b[0] -= b[2] / Real(2L);
  } else {
    b[0] = a[1];
  }
  for (Real& c : b) c /= p.interval.half();
  return Poly{p.interval, std::move(b)};
}

Poly poly_from_zeros(const Interval& iv, const std::vector<Complex>& zeros) {
  Poly p = poly_constant(iv, Real(1L));
  std::vector<Complex> pending;
  for (const Complex& z : zeros) {
    if (z.im.is_zero()) {
      p = poly_mul_linear(p, z.re);
      continue;
    }
    bool matched = false;
    for (size_t i = 0; i < pending.size(); ++i) {
      if (pending[i].re == z.re && pending[i].im == -z.im) {
        // (x - z)(x - conj z) = x^2 - 2 Re(z) x + |z|^2
        Poly quad = poly_mul_linear(poly_mul_linear(poly_constant(iv, Real(1L)),
                                                    z.re), z.re);
        quad.coeffs[0] += norm(z) - z.re * z.re;
        p = poly_mul(p, quad);
        pending.erase(pending.begin() + i);
        matched = true;
        break;
      }
    }
    if (!matched) pending.push_back(z);
  }
  if (!pending.empty())
    throw NumericError("poly_from_zeros: complex zeros must come in conjugate pairs");
  return p;
}

// ---------------------------------------------------------------------------
// zero finding

std::vector<Real> real_zeros_bracketed(const RealFn& f, const RealFn& df,
                                       const Interval& iv, long expected_count,
                                       const PrecisionConfig& cfg) {
  if (expected_count == 0) return {};
  Real pi = const_pi();
  Real mid = iv.mid(), half = iv.half();
  long m = std::max<long>(64, 8 * expected_count);
  std::vector<std::pair<Real, Real>> brackets;
  for (int attempt = 0; attempt < 4; ++attempt) {
    brackets.clear();
    Real prev_x = mid + half * cos(pi * Real(1L) / Real(2 * m));
    // scan descending angles => ascending x handled by sorting brackets later
    Real prev_f = f(prev_x);
    for (long j = 1; j < m; ++j) {
      Real x = mid + half * cos(pi * Real(2 * j + 1) / Real(2 * m));
      Real fx = f(x);
      if ((prev_f.sign() > 0) != (fx.sign() > 0)) brackets.emplace_back(x, prev_x);
      prev_x = x;
      prev_f = fx;
    }
    if (static_cast<long>(brackets.size()) == expected_count) break;
    m *= 4;
  }
  if (static_cast<long>(brackets.size()) != expected_count)
    throw NumericError("real_zeros_bracketed: found " + std::to_string(brackets.size()) +
                       " sign changes, expected " + std::to_string(expected_count));

  Real tol = pow2(-(cfg.mantissa_bits - 16)) * half;
  std::vector<Real> zeros;
  zeros.reserve(expected_count);
  for (auto& [lo0, hi0] : brackets) {
    Real lo = lo0, hi = hi0;
    Real flo = f(lo);
    for (int it = 0; it < 12; ++it) {
      Real c = (lo + hi) / Real(2L);
      Real fc = f(c);
      if ((fc.sign() > 0) == (flo.sign() > 0)) { lo = c; flo = fc; }
      else hi = c;
    }
    Real x = (lo + hi) / Real(2L);
    for (long it = 0; it < cfg.max_iter; ++it) {
      Real d = df(x);
      if (d.is_zero()) break;
      Real step = f(x) / d;
      Real xn = x - step;
      if (xn < lo || xn > hi) {  // Newton left the bracket: bisect
        Real fc = f(x);
        if ((fc.sign() > 0) == (flo.sign() > 0)) { lo = x; flo = fc; }
        else hi = x;
        xn = (lo + hi) / Real(2L);
      }
      Real change = abs(xn - x);
      x = xn;
      if (change < tol) break;
    }
    zeros.push_back(x);
  }
  std::sort(zeros.begin(), zeros.end(), [](const Real& a, const Real& b) { return a < b; });
  return zeros;
}

std::vector<Real> poly_real_zeros(const Poly& p, long expected_count,
                                  const PrecisionConfig& cfg) {
  Poly dp = poly_derivative(p);
  return real_zeros_bracketed([&p](const Real& x) { return p(x); },
                              [&dp](const Real& x) { return dp(x); }, p.interval,
                              expected_count, cfg);
}

bool zeros_interlace(const std::vector<Real>& lo, const std::vector<Real>& hi) {
  if (hi.size() != lo.size() + 1) return false;
  for (size_t i = 0; i < lo.size(); ++i)
    if (!(hi[i] < lo[i] && lo[i] < hi[i + 1])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// monic orthogonal polynomials

MonicOP monic_op_on_rule(const std::vector<Real>& nodes, const std::vector<Real>& weights,
                         const Interval& iv, long n) {
  size_t m = nodes.size();
  if (weights.size() != m) throw NumericError("monic_op_on_rule: size mismatch");
  if (2 * n >= static_cast<long>(m))
    throw NumericError("monic_op_on_rule: n must be < quad_order/2");
  for (const Real& w : weights)
    if (!w.is_finite() || w.sign() < 0)
      throw NumericError("monic_op_on_rule: weights must be positive and finite");

  // Chebyshev values T_k(t_i), k <= n
  Real mid = iv.mid(), half = iv.half();
  std::vector<std::vector<Real>> T(m);
  for (size_t i = 0; i < m; ++i) {
    Real t = (nodes[i] - mid) / half;
    T[i].resize(n + 1);
    T[i][0] = Real(1L);
    if (n >= 1) T[i][1] = t;
    for (long k = 2; k <= n; ++k)
      T[i][k] = Real(2L) * t * T[i][k - 1] - T[i][k - 2];
  }
  // Gram G_{jk} = sum_i w_i T_j(t_i) T_k(t_i), j,k <= n
  std::vector<std::vector<Real>> G(n + 1, std::vector<Real>(n + 1, Real(0L)));
  for (size_t i = 0; i < m; ++i)
    for (long j = 0; j <= n; ++j) {
      Real wj = weights[i] * T[i][j];
      for (long k = j; k <= n; ++k) G[j][k] += wj * T[i][k];
    }
  for (long j = 0; j <= n; ++j)
    for (long k = 0; k < j; ++k) G[j][k] = G[k][j];

  MonicOP out;
  if (n == 0) {
    out.Q = poly_constant(iv, Real(1L));
    out.tau = Real(1L) / sqrt(G[0][0]);
    out.ortho_residual = Real(0L);
    return out;
  }
  // monic normalization: coefficient of T_n fixed so the monomial lead is 1
  Real cn = pow_int(half, n) / pow2(n - 1);
  std::vector<std::vector<Real>> A(n, std::vector<Real>(n));
  std::vector<Real> rhs(n);
  for (long j = 0; j < n; ++j) {
    for (long k = 0; k < n; ++k) A[j][k] = G[j][k];
    rhs[j] = -G[j][n] * cn;
  }
  std::vector<Real> c = lin_solve(std::move(A), std::move(rhs));
  c.push_back(cn);
  out.Q = Poly{iv, std::move(c)};

  // tau and the orthogonality residual, straight from the rule
  Real qq(0L);
  std::vector<Real> dots(n, Real(0L));
  std::vector<Real> row_norm(n, Real(0L));
  for (size_t i = 0; i < m; ++i) {
    Real qi = out.Q(nodes[i]);
    Real wq = weights[i] * qi;
    qq += wq * qi;
    for (long j = 0; j < n; ++j) {
      dots[j] += wq * T[i][j];
      row_norm[j] += abs(weights[i] * qi * T[i][j]);
    }
  }
  if (!(qq > Real(0L)))
    throw NumericError("monic_op_on_rule: Gram system numerically singular (escalate precision)");
  out.tau = Real(1L) / sqrt(qq);
  out.ortho_residual = Real(0L);
  for (long j = 0; j < n; ++j)
    out.ortho_residual = max(out.ortho_residual, abs(dots[j]) / row_norm[j]);
  return out;
}

MonicOP monic_op(const Measure& mu, long n, const PrecisionConfig& cfg, const RealFn* abs_w) {
  cfg.validate();
  ScopedPrecision sp(cfg.mantissa_bits);
  Measure::Rule r = mu.rule(cfg.quad_order);
  if (abs_w)
    for (size_t i = 0; i < r.nodes.size(); ++i) r.weights[i] /= (*abs_w)(r.nodes[i]);
  return monic_op_on_rule(r.nodes, r.weights, mu.interval(), n);
}

// ---------------------------------------------------------------------------
// varying measures

Real VaryingMeasureSeq::abs_w(long n, const Real& x) const {
  Real v = abs(w_scale(n));
  for (const Complex& z : w_zeros(n)) v *= abs(Complex(x) - z);
  return v;
}

Real VaryingMeasureSeq::condition_iv_residual(long n, const PrecisionConfig& cfg) const {
  ChebGrid g = cheb_grid(mu.interval(), cfg);
  Real r(0L);
  for (const Real& x : g.nodes)
    r = max(r, abs(pow_int(phi(x), n) * abs_w(n, x) - Real(1L) / psi(x)));
  return r;
}

BlaschkeProduct VaryingMeasureSeq::blaschke(long n) const {
  return BlaschkeProduct{mu.interval(), w_zeros(n), 2 * n};
}

VaryingOP varying_op(const VaryingMeasureSeq& seq, long n, const PrecisionConfig& cfg) {
  cfg.validate();
  ScopedPrecision sp(cfg.mantissa_bits);
  std::vector<Complex> zeros = seq.w_zeros(n);
  for (const Complex& z : zeros)
    if (z.im.is_zero() && seq.mu.interval().contains(z.re))
      throw NumericError("varying_op: w_2n zero on the closed interval");
  RealFn aw = [&seq, n](const Real& x) { return seq.abs_w(n, x); };
  MonicOP m = monic_op(seq.mu, n, cfg, &aw);
  VaryingOP out{std::move(m.Q), std::move(m.tau), std::move(m.ortho_residual), {}};
  out.zeros = poly_real_zeros(out.Q, n, cfg);
  return out;
}

// ---------------------------------------------------------------------------
// multipoint Pade

Complex PadeApproximant::w(const Complex& z) const {
  Complex v(w_scale);
  for (const Complex& zr : w_zeros) v *= (z - zr);
  return v;
}

Complex PadeApproximant::value(const Complex& z) const {
  return numerator(z) / denominator(z);
}

PadeApproximant multipoint_pade(const Measure& mu, const std::vector<Complex>& w_zeros,
                                const Real& w_scale, long n, const PrecisionConfig& cfg) {
  cfg.validate();
  ScopedPrecision sp(cfg.mantissa_bits);
  if (static_cast<long>(w_zeros.size()) > 2 * n)
    throw NumericError("multipoint_pade: deg w_2n exceeds 2n");
  VaryingMeasureSeq seq{mu, [&w_zeros](long) { return w_zeros; },
                        [&w_scale](long) { return w_scale; }};
  RealFn aw = [&seq, n](const Real& x) { return seq.abs_w(n, x); };
  MonicOP m = monic_op(mu, n, cfg, &aw);

  PadeApproximant pa;
  pa.denominator = m.Q;
  pa.tau = m.tau;
  pa.n = n;
  pa.w_zeros = w_zeros;
  pa.w_scale = w_scale;

  // P_{n-1}(z) = integral [Q(z) w(x) - Q(x) w(z)] / (w(x) (z-x)) d(mu)(x)
  //            = integral DQ(z,x) d(mu) - integral (Q(x)/w(x)) Dw(z,x) d(mu)
  // with Dp the divided difference; coefficients assembled exactly.
  const Interval& iv = mu.interval();
  Measure::Rule r = mu.rule(cfg.quad_order);
  Poly wpoly = poly_scale(poly_from_zeros(iv, w_zeros), w_scale);
  long degp = std::max<long>(n - 1, 0);
  std::vector<Real> acc(degp + 1, Real(0L));
  for (size_t j = 0; j < r.nodes.size(); ++j) {
    const Real& x = r.nodes[j];
    Poly dq = poly_divided_difference(pa.denominator, x);
    for (long k = 0; k <= dq.degree() && k <= degp; ++k)
      acc[k] += r.weights[j] * dq.coeffs[k];
    if (wpoly.degree() >= 1) {
      Poly dw = poly_divided_difference(wpoly, x);
      Real f = r.weights[j] * pa.denominator(x) / wpoly(x);
      for (long k = 0; k <= dw.degree() && k <= degp; ++k)
        acc[k] -= f * dw.coeffs[k];
    }
  }
  pa.numerator = Poly{iv, std::move(acc)};
  return pa;
}

Complex pade_remainder(const PadeApproximant& pa, const Measure& mu, const Complex& z,
                       const PrecisionConfig& cfg) {
  return markov_transform(mu, z, cfg) - pa.value(z);
}

Complex pade_remainder_integral(const PadeApproximant& pa, const Measure& mu,
                                const Complex& z, const PrecisionConfig& cfg) {
  Measure::Rule r = mu.rule(cfg.quad_order);
  Complex s(Real(0L));
  for (size_t j = 0; j < r.nodes.size(); ++j) {
    Real q = pa.denominator(r.nodes[j]);
    Real aw = abs(pa.w(Complex(r.nodes[j])).re);
    s += Complex(r.weights[j] * q * q / aw) / (z - Complex(r.nodes[j]));
  }
  Complex q2 = pa.denominator(z);
  return pa.w(z) * s / (q2 * q2);
}

Real weak_star_diag(const VaryingMeasureSeq& seq, const RealFn& g, long n,
                    const PrecisionConfig& cfg) {
  cfg.validate();
  ScopedPrecision sp(cfg.mantissa_bits);
  VaryingOP v = varying_op(seq, n, cfg);
  Measure::Rule r = seq.mu.rule(cfg.quad_order);
  Real s(0L);
  for (size_t j = 0; j < r.nodes.size(); ++j) {
    Real q = v.tau * v.Q(r.nodes[j]);
    s += r.weights[j] * g(r.nodes[j]) * q * q / seq.abs_w(n, r.nodes[j]);
  }
  return s;
}

}  // namespace cbop
