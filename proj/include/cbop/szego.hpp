#pragma once


#include "cbop/measures.hpp"
#include "cbop/numkit.hpp"

namespace cbop {

// Conformal map of the exterior of [a,b] onto the exterior of the unit
// circle, Psi(inf) = inf, Psi'(inf) > 0. Boundary values on the interval
// are taken from the upper half-plane.
Complex psi_map(const Interval& iv, const Complex& u);
Real psi_map(const Interval& iv, const Real& u);
// Psi at x in [a,b], limit from above: e^{i theta}, theta = arccos of the
// normalized coordinate.
Complex psi_boundary_upper(const Interval& iv, const Real& x);

// sqrt((u-a)(u-b)) with the branch positive for u > b, continued through
// the upper half-plane; equals half*(Psi - 1/Psi)/2.
Complex exterior_root(const Interval& iv, const Complex& u);
Real exterior_root(const Interval& iv, const Real& u);

// Outer (Szego) function on the complement of one interval, stored as
//   ln h(x) = p ln(b-x) + q ln(x-a) + ln g(x),   g analytic,
// with the (b-x)^p, (x-a)^q parts evaluated in closed form and the smooth
// part by d(eta)-quadrature of its node table. Boundary law:
// |G(u)|^2 h(x) -> 1 as u -> x from either half-plane.
struct SzegoFn {
  Interval interval;
  Real exp_b;                  // p
  Real exp_a;                  // q
  ChebGrid grid;
  std::vector<Real> ln_smooth; // ln g at grid nodes
  Real value_at_inf;

  // ln h(x) including singular parts; x strictly inside the interval
  Real ln_h(const Real& x) const;
  // boundary modulus law: |G(x)|^2 = 1/h(x) on the interval
  Real boundary_modulus_sq(const Real& x) const;
};

// Smooth boundary data given as an evaluator (treated as analytic; no
// endpoint exponents).
SzegoFn szego_from_h(const Interval& iv, const RealFn& ln_h, const PrecisionConfig& cfg);
// Full control over the endpoint exponents; ln g sampled at grid nodes.
SzegoFn szego_from_parts(const Interval& iv, Real p, Real q,
                         std::vector<Real> ln_smooth, ChebGrid grid);
SzegoFn szego_from_parts(const Interval& iv, Real p, Real q, const RealFn& ln_smooth,
                         const PrecisionConfig& cfg);
// G(mu, .): h(x) = sqrt((b-x)(x-a)) mu'(x)
SzegoFn szego_from_measure(const Measure& m, const PrecisionConfig& cfg);

Complex szego_eval(const SzegoFn& fn, const Complex& u);
Real szego_eval(const SzegoFn& fn, const Real& u);

// |G(x+i eps)|^2 h(x) - 1 extrapolated to eps -> 0 (Richardson, ratio 2);
// an evaluator diagnostic, not a production path.
Real szego_boundary_residual(const SzegoFn& fn, const Real& x, const Real& eps0, int levels = 5);

// Finite Blaschke-type product for the exterior of an interval. zeros
// lists the finite zeros (with multiplicity, conjugate-closed for real
// products); the remaining total_degree - zeros.size() factors sit at
// infinity and contribute 1/Psi(u) each.
struct BlaschkeProduct {
  Interval interval;
  std::vector<Complex> zeros;
  long total_degree = 0;
};

Complex blaschke_eval(const BlaschkeProduct& bp, const Complex& u);
// sum over all factors of (1 - 1/|Psi(zero)|); infinity contributes 1.
Real blaschke_divergence_term(const BlaschkeProduct& bp);

// Optional data for the comparison-function identity: Phi, C and the
// external-field weight phi of the equilibrium problem they solve.
struct ComparisonData {
  std::function<Complex(const Complex&)> Phi;
  Real C;
  RealFn phi;
};

struct OuterIdentityReport {
  Real max_resid_blaschke;    // Psi^{2n} B_{2n} / w_{2n} vs outer integral
  Real max_resid_comparison;  // (C Phi / Psi)^{2n} vs outer integral of phi^n
  bool comparison_checked = false;
};

// Validates the two outer-function identities used by the varying-measure
// asymptotics on a fixed exterior ring. w_{2n}(x) = kappa prod (x - z_i),
// extended by zeros at infinity up to degree 2n.
OuterIdentityReport outer_identity_check(const std::vector<Complex>& w_zeros,
                                         const Real& kappa, long n, const Interval& iv,
                                         const PrecisionConfig& cfg,
                                         const ComparisonData* cmp = nullptr);

// Fixed exterior probe ring (radius factor rho in units of the half-length)
std::vector<Complex> exterior_ring(const Interval& iv, double rho, int count);

}  // namespace cbop
