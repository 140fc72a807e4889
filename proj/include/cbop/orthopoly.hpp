#pragma once

#include "cbop/measures.hpp"
#include "cbop/szego.hpp"

namespace cbop {

// Polynomial in the Chebyshev basis of its native interval,
// p(x) = sum coeffs[k] T_k(t), t = (x - mid)/half. Evaluation is global.
struct Poly {
  Interval interval;
  std::vector<Real> coeffs;  // degree = coeffs.size() - 1

  long degree() const { return static_cast<long>(coeffs.size()) - 1; }
  Real operator()(const Real& x) const;
  Complex operator()(const Complex& z) const;
  // leading coefficient in the monomial basis
  Real leading_coeff() const;
  bool is_monic(const Real& tol) const;
};

Poly poly_constant(const Interval& iv, Real c);
// monic polynomial with the given real roots
Poly poly_from_roots(const Interval& iv, const std::vector<Real>& roots);
Poly poly_mul(const Poly& p, const Poly& q);
// p * (x - r)
Poly poly_mul_linear(const Poly& p, const Real& r);
Poly poly_derivative(const Poly& p);
Poly poly_scale(const Poly& p, const Real& s);
Poly poly_make_monic(const Poly& p);
// interpolate values given at the nodes of a ChebGrid (exact for deg < order)
Poly poly_interpolate(const ChebGrid& grid, const std::vector<Real>& values, long degree);
// max |coefficient| difference after re-expanding q on p's interval
Real poly_coeff_distance(const Poly& p, const Poly& q);
// q with (z - x) q(z) = p(z) - p(x)  (synthetic division in the Chebyshev
// basis; exact, valid for x anywhere)
Poly poly_divided_difference(const Poly& p, const Real& x);
// monic real polynomial from a conjugate-closed zero list
Poly poly_from_zeros(const Interval& iv, const std::vector<Complex>& zeros);

// All real, simple zeros of p inside (a,b), ascending. Brackets sign
// changes on a Chebyshev-angle scan grid, then polishes with bisection +
// Newton at working precision. Throws when the count disagrees with
// expected_count (precision exhaustion or a contract violation upstream).
std::vector<Real> poly_real_zeros(const Poly& p, long expected_count,
                                  const PrecisionConfig& cfg);
// same scheme for a general evaluator (derivative by central difference
// replaced with caller-supplied derivative)
std::vector<Real> real_zeros_bracketed(const RealFn& f, const RealFn& df,
                                       const Interval& iv, long expected_count,
                                       const PrecisionConfig& cfg);

bool zeros_interlace(const std::vector<Real>& lo, const std::vector<Real>& hi);

// ---------------------------------------------------------------------------

struct MonicOP {
  Poly Q;
  Real tau;             // (int Q^2 dW)^{-1/2}
  Real ortho_residual;  // max_j |<T_j, Q>| / ||row|| for j < n
};

// Monic orthogonal polynomial of degree n for the discrete rule
// sum weights[i] f(nodes[i]) (a measure rule, possibly divided by a
// varying denominator). Throws on a numerically singular Gram system.
MonicOP monic_op_on_rule(const std::vector<Real>& nodes, const std::vector<Real>& weights,
                         const Interval& iv, long n);
// weight d(mu)/|w|, with w given as an evaluator of |w_{2n}| (nullptr: 1)
MonicOP monic_op(const Measure& mu, long n, const PrecisionConfig& cfg,
                 const RealFn* abs_w = nullptr);

// Varying-measure family d(mu_n)/|w_{2n}| with denominators given by their
// zeros (finite ones; remaining zeros at infinity) and a scale factor.
struct VaryingMeasureSeq {
  Measure mu;
  std::function<std::vector<Complex>(long)> w_zeros = [](long) {
    return std::vector<Complex>{};
  };
  std::function<Real(long)> w_scale = [](long) { return Real(1L); };
  // condition iv) data: phi^n(x) |w_2n(x)| -> 1/psi(x)
  RealFn phi = [](const Real&) { return Real(1L); };
  RealFn psi = [](const Real&) { return Real(1L); };

  Real abs_w(long n, const Real& x) const;
  // sup over interior check nodes of |phi^n |w_2n| - 1/psi|
  Real condition_iv_residual(long n, const PrecisionConfig& cfg) const;
  BlaschkeProduct blaschke(long n) const;
};

struct VaryingOP {
  Poly Q;
  Real tau;
  Real ortho_residual;
  std::vector<Real> zeros;
};

VaryingOP varying_op(const VaryingMeasureSeq& seq, long n, const PrecisionConfig& cfg);

// ---------------------------------------------------------------------------

struct PadeApproximant {
  Poly numerator;    // P_{n-1}
  Poly denominator;  // Q_n, monic, orthogonal w.r.t. d(mu)/|w_2n|
  Real tau;          // normalization of Q_n
  long n = 0;
  std::vector<Complex> w_zeros;
  Real w_scale;

  Complex w(const Complex& z) const;
  Complex value(const Complex& z) const;  // R_n = P/Q
};

PadeApproximant multipoint_pade(const Measure& mu, const std::vector<Complex>& w_zeros,
                                const Real& w_scale, long n, const PrecisionConfig& cfg);
// remainder mu_hat - R_n and the integral form it must equal
Complex pade_remainder(const PadeApproximant& pa, const Measure& mu, const Complex& z,
                       const PrecisionConfig& cfg);
Complex pade_remainder_integral(const PadeApproximant& pa, const Measure& mu,
                                const Complex& z, const PrecisionConfig& cfg);

// integral g q_n^2 d(mu_n)/|w_2n| (weak-star diagnostic; the harness
// compares against the arcsine average (1/pi) integral g d(eta))
Real weak_star_diag(const VaryingMeasureSeq& seq, const RealFn& g, long n,
                    const PrecisionConfig& cfg);

}  // namespace cbop
