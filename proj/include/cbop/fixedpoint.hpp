#pragma once

#include "cbop/biortho.hpp"
#include "cbop/potential.hpp"

namespace cbop {

// Pair of positive boundary functions: g1 lives on Delta2, g2 on Delta1,
// stored as log tables at Chebyshev nodes.
struct BoundaryPair {
  ChebGrid grid_on_2;  // domain of g1
  ChebGrid grid_on_1;  // domain of g2
  std::vector<Real> ln_g1;  // at grid_on_2 nodes
  std::vector<Real> ln_g2;  // at grid_on_1 nodes
};

BoundaryPair constant_pair(const ChebGrid& g2dom, const ChebGrid& g1dom, const Real& c1,
                           const Real& c2);

// d = max of the sup norms of the log ratios
Real metric_d(const BoundaryPair& p, const BoundaryPair& q);

// Fixed data of the operator: the denominators of the two boundary laws,
//   w1(x) = sqrt((b1-x)(x-a1)) u1(x) sigma1'(x)   on Delta1,
//   w2(x) = sqrt((b2-x)(x-a2)) u2(x) sigma2'(x)   on Delta2,
// stored as endpoint exponents plus smooth log tables. The A-side weights
// take u1 = h_tilde, u2 = 1; the B-side takes u1 = 1, u2 = ell.
struct TWeights {
  Interval iv1, iv2;
  ChebGrid grid1, grid2;
  Real p1, q1, p2, q2;                 // endpoint exponents of w1, w2
  std::vector<Real> ln_w1_smooth;      // at grid1 nodes
  std::vector<Real> ln_w2_smooth;      // at grid2 nodes
};

TWeights make_T_weights(const MeasurePair& pair, const RealFn* u1, const RealFn* u2,
                        const PrecisionConfig& cfg);

// closed-form limit weights of the ML systems:
//   h(t) = 1/sqrt(|t-a2||t-b2|) on Delta1,  ell(t) = 1/sqrt(|t-a1||t-b1|) on Delta2
RealFn ml_limit_h(const MeasurePair& pair);
RealFn ml_limit_ell(const MeasurePair& pair);

// T(g1,g2) = (g1*, g2*): the Szego functions with |g1*|^2 = g2/w1 on Delta1
// and |g2*|^2 = g1/w2 on Delta2, sampled back on the opposite intervals.
BoundaryPair operator_T(const BoundaryPair& p, const TWeights& w);
// convenience overload: A-side weights built from h_tilde
BoundaryPair operator_T(const BoundaryPair& p, const RealFn& h_tilde,
                        const MeasurePair& pair, const PrecisionConfig& cfg);

enum class GSide { A, B };

struct GPair {
  GSide side;
  SzegoFn G1;  // analytic off Delta1
  SzegoFn G2;  // analytic off Delta2
  Real boundary_residual;  // max log-residual of the two boundary laws
  long iterations = 0;
  std::vector<Real> trace;  // metric step per sweep
};

// Unique fixed point of T, iterated from the constant pair (1,1) until the
// metric step drops below fp_tol.
GPair fixed_point_G(const TWeights& w, const PrecisionConfig& cfg, GSide side = GSide::A);
// A-side (h_tilde = ml_limit_h) or B-side (ell) fixed point for a pair
GPair fixed_point_G(const MeasurePair& pair, GSide side, const PrecisionConfig& cfg);

// Everything the convergence harness compares polynomial data against.
struct LimitBundle {
  MeasurePair pair;
  EquilibriumPair eq;
  ComparisonFn phi1, phi2;
  GPair G;       // A-side fixed point
  GPair G_star;  // B-side fixed point
  PrecisionConfig cfg;

  Complex G_over_inf(int k, const Complex& z) const;       // G_k / G_k(inf)
  Complex Gstar_over_inf(int k, const Complex& z) const;
  Real G_inf(int k) const;
  Complex phi_pow(int k, long n, const Complex& z) const;  // Phi_k^n
  Real C_pow(int k, long n) const;                         // C_k^n
  // limit of kappa_{n,k}/C_k^n: G_k(inf)/(sqrt(2 pi) sqrt(G_{3-k}(inf)))
  // (the cross factor comes from the normalized limit pair in the
  // fixed-point construction)
  Real kappa_limit(int k) const;
  // modulus asymptote of kappa2^2 A_{n,1} (Phi2/Phi1)^{-n}
  Real asym_An1_rhs(const Complex& z) const;
  // modulus asymptote of (kappa1 kappa2)^2 A_{n,0} Phi1^n
  Real asym_An0_rhs(const Complex& z) const;
  // limit of |C2^2 Phi2^2 / Phi1|^n |sigma2_hat - a_{n,1}/a_{n,2}|
  Real cero_rhs(const Complex& z) const;
  // |C2^2 Phi2^2 / Phi1| = exp(-(2 V_2 - V_1 - 2 gamma_2)) > 1 on Omega2;
  // its reciprocal is the geometric decay factor of a_{n,1}/a_{n,2} - s22_hat
  Real rate_factor(const Complex& z) const;
  Real decay_factor(const Complex& z) const;  // 1/rate_factor, < 1 on Omega2
  // limit of a_{n,j}/Phi_2^n: s_{2,j+1}_hat * G2 / G2(inf), j = 0 or 1
  Complex anj_asymptote(int j, const Complex& z) const;
};

LimitBundle make_limit_bundle(const MeasurePair& pair, const PrecisionConfig& cfg);

}  // namespace cbop
