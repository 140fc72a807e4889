#pragma once

#include "cbop/orthopoly.hpp"
#include "cbop/potential.hpp"

namespace cbop {

// Discretized Cauchy pairing in the Chebyshev bases of the two intervals:
// entries[i][j] = int int T_i(x) T_j(y) / (x - y) d(sigma1)(x) d(sigma2)(y).
// (The monomial-basis pairing of the defining relations spans the same
// test space; the Chebyshev basis keeps the solves well scaled.)
struct CauchyKernelGram {
  Interval iv1, iv2;
  long n = 0;
  std::vector<std::vector<Real>> entries;  // (n+1) x (n+1)
};

CauchyKernelGram cauchy_gram(const MeasurePair& pair, long n, const PrecisionConfig& cfg);

struct BiorthoPair {
  Poly P;  // monic, degree n, zeros in Delta1
  Poly Q;  // monic, degree n, zeros in Delta2
  Real C;  // diagonal pairing value, nonzero
  long n = 0;
};

BiorthoPair biorthogonal_pair(const MeasurePair& pair, long n, const PrecisionConfig& cfg);
// full (n+1)x(n+1) pairing matrix of the computed families P_0..P_n, Q_0..Q_n
std::vector<std::vector<Real>> biortho_pairing_matrix(const MeasurePair& pair, long n,
                                                      const PrecisionConfig& cfg);

// Multilevel Hermite-Pade system for the Nikishin system N(sigma_a, sigma_b).
// For the A-side call sigma_a = sigma1; the B-side is the same construction
// on the swapped pair (then a2 = P_n, Q1's zeros lie in Delta2, and the
// weight limit is ell instead of h).
struct HPSystem {
  long n = 0;
  Poly a0, a1, a2;     // deg <= n-1, <= n-1, = n (monic)
  Poly Q1;             // monic, degree n, zeros interior to Delta_a
  std::vector<Real> Q1_zeros;
  std::vector<Real> a2_zeros;
  Real kappa1, kappa2;
  // residuals of the defining orthogonality relations
  Real resid_int3, resid_int4;

  // forms: A1(z) = int a2(y) d(sigma_b)(y) / (z - y) (z off Delta_b),
  // A0(z) = int A1(x) d(sigma_a)(x) / (z - x)      (z off Delta_a)
  std::function<Complex(const Complex&)> A1, A0;
  // H_{n,1}(z) = int a2^2(x) / ((z-x) Q1(x)) d(sigma_b)(x); h = kappa2^2 H
  std::function<Real(const Real&)> h1;
};

HPSystem hp_system(const MeasurePair& pair, long n, const PrecisionConfig& cfg);
// the mirrored system for N(sigma2, sigma1); a2 = P_n of the BiorthoPair
HPSystem hp_system_b(const MeasurePair& pair, long n, const PrecisionConfig& cfg);

// forms by the order-condition linear combinations (route-equivalence
// check): A1 = -a1 + a2 s22_hat, A0 = a0 - a1 s11_hat + a2 s12_hat.
Complex form_A1_linear(const HPSystem& sys, const MeasurePair& pair, const Complex& z,
                       const PrecisionConfig& cfg);
Complex form_A0_linear(const HPSystem& sys, const MeasurePair& pair, const Complex& z,
                       const PrecisionConfig& cfg);

// One application of the polynomial operator: Q2* orthogonal w.r.t.
// d(sigma2)/|Q1_hat|, Q1* w.r.t. h_tilde d(sigma1)/|Q2_hat|.
std::pair<Poly, Poly> tilde_T_n(const Poly& hatQ1, const Poly& hatQ2, const RealFn& h_tilde,
                                const MeasurePair& pair, long n, const PrecisionConfig& cfg);

struct HPFixedPoint {
  HPSystem sys;
  long iterations = 0;
  std::vector<Real> trace;  // sup zero displacement per sweep
};

// Iterates tilde_T_n with h_tilde recomputed from the current pair each
// sweep (the Brouwer route); agrees with hp_system coefficientwise.
HPFixedPoint hp_fixed_point_route(const MeasurePair& pair, long n, const PrecisionConfig& cfg);

}  // namespace cbop
