#include "cbop/szego.hpp"

namespace cbop {

namespace {

void require_off_interval(const Interval& iv, const Complex& u, const char* who) {
  if (u.im.is_zero() && iv.strictly_inside(u.re))
    throw NumericError(std::string(who) + ": point strictly inside the interval");
}

}  // namespace

Complex psi_map(const Interval& iv, const Complex& u) {
  require_off_interval(iv, u, "psi_map");
  Complex w = (u - Complex(iv.mid())) / Complex(iv.half());
  return w + sqrt(w - Complex(Real(1L))) * sqrt(w + Complex(Real(1L)));
}

Real psi_map(const Interval& iv, const Real& u) {
  Complex p = psi_map(iv, Complex(u));
  return p.re;
}

Complex psi_boundary_upper(const Interval& iv, const Real& x) {
  if (!iv.contains(x)) throw NumericError("psi_boundary_upper: x off the interval");
  Real t = (x - iv.mid()) / iv.half();
  Real th = atan2(sqrt((Real(1L) - t) * (Real(1L) + t)), t);  // arccos
  return Complex(cos(th), sin(th));
}

Complex exterior_root(const Interval& iv, const Complex& u) {
  Complex psi = psi_map(iv, u);
  return Complex(iv.half()) * (psi - inv(psi)) / Complex(Real(2L));
}

Real exterior_root(const Interval& iv, const Real& u) {
  return exterior_root(iv, Complex(u)).re;
}

// ---------------------------------------------------------------------------
// SzegoFn

Real SzegoFn::ln_h(const Real& x) const {
  if (!interval.strictly_inside(x)) throw NumericError("SzegoFn::ln_h: x not interior");
  Real v = barycentric(grid, ln_smooth, x);
  if (!exp_b.is_zero()) v += exp_b * log(interval.b - x);
  if (!exp_a.is_zero()) v += exp_a * log(x - interval.a);
  return v;
}

Real SzegoFn::boundary_modulus_sq(const Real& x) const { return exp(-ln_h(x)); }

SzegoFn szego_from_parts(const Interval& iv, Real p, Real q, std::vector<Real> ln_smooth,
                         ChebGrid grid) {
  SzegoFn fn{iv, std::move(p), std::move(q), std::move(grid), std::move(ln_smooth), Real(0L)};
  for (const Real& v : fn.ln_smooth)
    if (!v.is_finite()) throw NumericError("szego_from_parts: non-finite log data");
  // value at infinity from the u -> inf limit of the defining integral:
  // exp(-(1/2pi) integral ln h d(eta)), singular parts in closed form.
  Real pi = const_pi();
  Real s(0L);
  for (const Real& v : fn.ln_smooth) s += v;
  Real total = (fn.exp_b + fn.exp_a) * pi * log((iv.b - iv.a) / Real(4L)) +
               s * fn.grid.weights[0];
  fn.value_at_inf = exp(-total / (Real(2L) * pi));
  return fn;
}

SzegoFn szego_from_parts(const Interval& iv, Real p, Real q, const RealFn& ln_smooth,
                         const PrecisionConfig& cfg) {
  ChebGrid grid = cheb_grid(iv, cfg);
  std::vector<Real> vals;
  vals.reserve(grid.nodes.size());
  for (const Real& x : grid.nodes) vals.push_back(ln_smooth(x));
  return szego_from_parts(iv, std::move(p), std::move(q), std::move(vals), std::move(grid));
}

SzegoFn szego_from_h(const Interval& iv, const RealFn& ln_h, const PrecisionConfig& cfg) {
  return szego_from_parts(iv, Real(0L), Real(0L), ln_h, cfg);
}

SzegoFn szego_from_measure(const Measure& m, const PrecisionConfig& cfg) {
  return szego_from_parts(m.interval(), m.exponent_b(), m.exponent_a(),
                          [&m](const Real& x) {
                            Real g = m.smooth(x);
                            if (!(g > Real(0L)))
                              throw NumericError("szego_from_measure: density not positive");
                            return log(g);
                          },
                          cfg);
}

namespace {

// Closed-form outer factor with boundary modulus |E|^2 = (b-x)^{-p}:
//   E_b(u) = (sqrt(2) Psi / (Psi - 1))^p * half^{-p/2}
// and the (x-a)^q mirror with (Psi + 1). The Moebius image of |z|>1 under
// z/(z -+ 1) lies in Re > 1/2, so the principal power is branch-safe.
Complex endpoint_factor(const Complex& psi, const Real& half, const Real& p, int at_b) {
  Complex base = Complex(sqrt(Real(2L))) * psi /
                 (psi + Complex(at_b ? Real(-1L) : Real(1L)));
  return pow(base, p) * Complex(pow(half, -p / Real(2L)));
}

}  // namespace

Complex szego_eval(const SzegoFn& fn, const Complex& u) {
  require_off_interval(fn.interval, u, "szego_eval");
  Complex psi = psi_map(fn.interval, u);
  Complex root = Complex(fn.interval.half()) * (psi - inv(psi)) / Complex(Real(2L));
  Complex result(Real(1L));
  if (!fn.exp_b.is_zero()) result *= endpoint_factor(psi, fn.interval.half(), fn.exp_b, 1);
  if (!fn.exp_a.is_zero()) result *= endpoint_factor(psi, fn.interval.half(), fn.exp_a, 0);
  // smooth part: exp[root/(2 pi) * integral ln g(x)/(x-u) d(eta)]
  Complex s(Real(0L));
  for (size_t j = 0; j < fn.grid.nodes.size(); ++j)
    s += Complex(fn.ln_smooth[j]) / (Complex(fn.grid.nodes[j]) - u);
  s *= Complex(fn.grid.weights[0]);
  Real two_pi = Real(2L) * const_pi();
  result *= exp(root * s / Complex(two_pi));
  return result;
}

Real szego_eval(const SzegoFn& fn, const Real& u) {
  return szego_eval(fn, Complex(u)).re;
}

Real szego_boundary_residual(const SzegoFn& fn, const Real& x, const Real& eps0, int levels) {
  Real h = exp(fn.ln_h(x));
  std::vector<Real> tab;
  tab.reserve(levels);
  Real eps = eps0;
  for (int j = 0; j < levels; ++j) {
    Complex g = szego_eval(fn, Complex(x, eps));
    tab.push_back(norm(g) * h);
    eps /= Real(2L);
  }
  // Richardson with step ratio 2 on v(eps) = v0 + c1 eps + c2 eps^2 + ...
  for (int m = 1; m < levels; ++m) {
    Real f = pow2(m);
    for (int j = levels - 1; j >= m; --j)
      tab[j] = (f * tab[j] - tab[j - 1]) / (f - Real(1L));
  }
  return abs(tab[levels - 1] - Real(1L));
}

// ---------------------------------------------------------------------------
// Blaschke products

Complex blaschke_eval(const BlaschkeProduct& bp, const Complex& u) {
  require_off_interval(bp.interval, u, "blaschke_eval");
  if (static_cast<long>(bp.zeros.size()) > bp.total_degree)
    throw NumericError("blaschke_eval: more zeros than total degree");
  Complex psi_u = psi_map(bp.interval, u);
  Complex prod(Real(1L));
  for (const Complex& z : bp.zeros) {
    Complex psi_z = psi_map(bp.interval, z);
    prod *= (psi_u - psi_z) / (Complex(Real(1L)) - conj(psi_z) * psi_u);
  }
  long at_inf = bp.total_degree - static_cast<long>(bp.zeros.size());
  if (at_inf > 0) prod *= pow_int(psi_u, -at_inf);
  return prod;
}

Real blaschke_divergence_term(const BlaschkeProduct& bp) {
  Real s(0L);
  for (const Complex& z : bp.zeros)
    s += Real(1L) - Real(1L) / abs(psi_map(bp.interval, z));
  s += Real(bp.total_degree - static_cast<long>(bp.zeros.size()));
  return s;
}

// ---------------------------------------------------------------------------

std::vector<Complex> exterior_ring(const Interval& iv, double rho, int count) {
  std::vector<Complex> pts;
  pts.reserve(count);
  Real pi = const_pi();
  Real mid = iv.mid(), half = iv.half();
  for (int k = 0; k < count; ++k) {
    Real th = Real(2L) * pi * Real(k) / Real(count) + pi / Real(2 * count);
    pts.push_back(Complex(mid + half * Real(rho) * cos(th), half * Real(rho) * sin(th)));
  }
  return pts;
}

OuterIdentityReport outer_identity_check(const std::vector<Complex>& w_zeros,
                                         const Real& kappa, long n, const Interval& iv,
                                         const PrecisionConfig& cfg,
                                         const ComparisonData* cmp) {
  cfg.validate();
  ScopedPrecision sp(cfg.mantissa_bits);
  if (!(kappa > Real(0L)) && !(kappa < Real(0L)))
    throw NumericError("outer_identity_check: kappa must be nonzero");
  for (const Complex& z : w_zeros)
    if (z.im.is_zero() && iv.contains(z.re))
      throw NumericError("outer_identity_check: w_2n zero on the interval");

  ChebGrid grid = cheb_grid(iv, cfg);
  std::vector<Real> ln_abs_w;
  ln_abs_w.reserve(grid.nodes.size());
  for (const Real& x : grid.nodes) {
    Real s = log(abs(kappa));
    for (const Complex& z : w_zeros) s += log(abs(Complex(x) - z));
    ln_abs_w.push_back(s);
  }

  BlaschkeProduct bp{iv, w_zeros, 2 * n};
  std::vector<Complex> probes = exterior_ring(iv, 2.5, 12);
  probes.push_back(Complex(iv.b + iv.half()));
  probes.push_back(Complex(iv.a - iv.half()));
  probes.push_back(Complex(iv.b + Real(2L) * iv.half()));

  Real pi = const_pi();
  OuterIdentityReport rep{Real(0L), Real(0L), cmp != nullptr};
  for (const Complex& u : probes) {
    Complex psi = psi_map(iv, u);
    Complex root = exterior_root(iv, u);
    // w(u)
    Complex w(kappa);
    for (const Complex& z : w_zeros) w *= (u - z);
    Complex lhs = pow_int(psi, 2 * n) * blaschke_eval(bp, u) / w;
    Complex s(Real(0L));
    for (size_t j = 0; j < grid.nodes.size(); ++j)
      s += Complex(ln_abs_w[j]) / (Complex(grid.nodes[j]) - u);
    s *= Complex(grid.weights[0]);
    Complex rhs = exp(root * s / Complex(pi));
    rep.max_resid_blaschke = max(rep.max_resid_blaschke, abs(lhs - rhs) / abs(rhs));

    if (cmp) {
      Complex lhs2 = pow_int(Complex(cmp->C) * cmp->Phi(u) / psi, 2 * n);
      Complex s2(Real(0L));
      for (size_t j = 0; j < grid.nodes.size(); ++j)
        s2 += Complex(Real(n) * log(cmp->phi(grid.nodes[j]))) /
              (Complex(grid.nodes[j]) - u);
      s2 *= Complex(grid.weights[0]);
      Complex rhs2 = exp(root * s2 / Complex(pi));
      rep.max_resid_comparison = max(rep.max_resid_comparison, abs(lhs2 - rhs2) / abs(rhs2));
    }
  }
  return rep;
}

}  // namespace cbop
