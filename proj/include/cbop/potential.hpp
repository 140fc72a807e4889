#pragma once

#include "cbop/szego.hpp"

namespace cbop {

// Positive density w.r.t. d(eta) sampled at ChebGrid nodes, with its
// Chebyshev expansion (used for closed-form log-moment potentials).
struct ChebDensity {
  ChebGrid grid;
  std::vector<Real> values;
  std::vector<Real> coeffs;
  Real mass;

  const Interval& interval() const { return grid.interval; }
};

ChebDensity make_cheb_density(ChebGrid grid, std::vector<Real> values);
// arcsine (Chebyshev) measure: constant density 1/pi, mass 1
ChebDensity chebyshev_density(const ChebGrid& grid);

// Complex logarithmic potential W(z) = integral ln(z - x) d(lambda)(x),
// via Chebyshev log-moments; z off the closed interval. Phi = exp(W).
Complex complex_potential(const ChebDensity& d, const Complex& z);
// V(z) = integral ln 1/|z - x| d(lambda); defined everywhere (on-interval
// evaluation uses the closed-form singular moments, not quadrature).
Real log_potential(const ChebDensity& d, const Complex& z);
Real log_potential(const ChebDensity& d, const Real& x);

// Sweep of a source measure onto a disjoint interval: same mass, potential
// difference constant on the target.
ChebDensity balayage_onto(const Real& point, const Interval& target, const PrecisionConfig& cfg);
ChebDensity balayage_onto(const ChebDensity& source, const Interval& target,
                          const PrecisionConfig& cfg);

// External field -1/2 ln phi = V_tau given by a source measure tau of mass
// c <= 1 on an interval (or point) disjoint from the target interval.
struct FieldSource {
  // point mass: tau = c * delta_t
  static FieldSource point(Real t, Real c);
  static FieldSource density(ChebDensity tau);

  bool is_point = false;
  Real t, c;
  ChebDensity tau;  // used when !is_point
  Real mass() const;
  Real potential_at(const Real& x) const;  // V_tau at x off the source support
};

struct WeightedEquilibrium {
  ChebDensity lambda;  // mass 1, support = target interval
  Real gamma;
  Real residual;  // max |V_lambda - V_tau - gamma| over interior nodes
};

WeightedEquilibrium weighted_equilibrium(const Interval& iv, const FieldSource& tau,
                                         const PrecisionConfig& cfg);

struct EquilibriumPair {
  ChebDensity lambda1, lambda2;  // probability measures
  Real gamma1, gamma2;
  Real residual1, residual2;     // equilibrium-identity deviations
  long iterations = 0;
  std::vector<Real> step_history;  // sup-norm change per sweep
};

// V_{l1} - 1/2 V_{l2} = g1 on Delta1, V_{l2} - 1/2 V_{l1} = g2 on Delta2,
// solved by the balayage fixed-point iteration from the arcsine pair.
EquilibriumPair vector_equilibrium(const Interval& iv1, const Interval& iv2,
                                   const PrecisionConfig& cfg);

// Phi(u) = exp(-V - i V~) with monic normalization Phi(u)/u -> 1 (mass 1);
// C = e^gamma.
struct ComparisonFn {
  ChebDensity lambda;
  Real C;
  const Interval& interval() const { return lambda.grid.interval; }
};

std::pair<ComparisonFn, ComparisonFn> comparison_functions(const EquilibriumPair& eq);
Complex complex_phi(const ComparisonFn& cf, const Complex& u);

// Pair (F1, F2): F_k and 1/F_k analytic off Delta_k, F_k(z)/z -> F_k'(inf) > 0,
// |F_1|^2 = |F_2| on Delta_1 and |F_2|^2 = |F_1| on Delta_2. Represented as
// F_k = pole_k * outer_k with pole_k(z) = Psi_k(z) (b_k - a_k)/4.
struct ConformalBranches {
  Interval iv1, iv2;
  SzegoFn outer1, outer2;
  Real f1_inf_deriv, f2_inf_deriv;
  Real boundary_residual;
  long iterations = 0;
};

ConformalBranches conformal_branches(const Interval& iv1, const Interval& iv2,
                                     const PrecisionConfig& cfg);
// F_k(z), k = 1 or 2
Complex conformal_F(const ConformalBranches& cb, int k, const Complex& z);

}  // namespace cbop
