#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbop/real.hpp"

namespace cbop {

using RealFn = std::function<Real(const Real&)>;

// Thrown on contract violations (degenerate intervals, points on a cut,
// singular systems, non-convergence). what() carries the failing op.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PrecisionConfig {
  long mantissa_bits = 256;  // binary precision of all floats
  long quad_order = 256;     // nodes per interval
  Real fp_tol;               // fixed-point stopping tolerance
  long max_iter = 400;

  PrecisionConfig() : fp_tol(pow2(-64)) {}
  static PrecisionConfig with_bits(long bits, long order = 0) {
    PrecisionConfig c;
    c.mantissa_bits = bits;
    c.quad_order = order > 0 ? order : c.quad_order;
    ScopedPrecision sp(bits);
    c.fp_tol = pow2(-(bits / 4));
    return c;
  }
  void validate() const {
    if (mantissa_bits < 64) throw NumericError("PrecisionConfig: mantissa_bits must be >= 64");
    if (quad_order < 16) throw NumericError("PrecisionConfig: quad_order must be >= 16");
    if (!(fp_tol > Real(0L))) throw NumericError("PrecisionConfig: fp_tol must be positive");
    if (max_iter < 1) throw NumericError("PrecisionConfig: max_iter must be positive");
  }
  // residual tolerance for orthogonality solves (square-root loss)
  Real resid_tol() const { return pow2(-(mantissa_bits / 2)); }
  // equilibrium-condition tolerance (quadrature + iteration stacking)
  Real equil_tol() const { return Real(1000L) * fp_tol; }
};

struct Interval {
  Real a, b;

  Interval() : a(-1.0), b(1.0) {}
  Interval(Real a_, Real b_) : a(std::move(a_)), b(std::move(b_)) {
    if (!(a < b) || !a.is_finite() || !b.is_finite())
      throw NumericError("Interval: requires finite a < b");
  }
  Interval(double a_, double b_) : Interval(Real(a_), Real(b_)) {}

  Real mid() const { return (a + b) / Real(2L); }
  Real half() const { return (b - a) / Real(2L); }
  bool contains(const Real& x) const { return x >= a && x <= b; }
  bool strictly_inside(const Real& x) const { return x > a && x < b; }
};

bool disjoint(const Interval& d1, const Interval& d2);
Real gap(const Interval& d1, const Interval& d2);

// Chebyshev–Gauss grid on an interval. Nodes are the mapped Chebyshev
// zeros, ascending; quadrature sum(w_j f(x_j)) integrates f against
// d(eta) = dx / sqrt((b-x)(x-a)), exactly for polynomials of degree < 2n.
struct ChebGrid {
  Interval interval;
  std::vector<Real> nodes;   // ascending, strictly inside (a,b)
  std::vector<Real> theta;   // node angles: nodes[j] = mid + half*cos(theta[j])
  std::vector<Real> weights; // all equal pi/n
  long order = 0;
};

ChebGrid cheb_grid(const Interval& iv, const PrecisionConfig& cfg);
ChebGrid cheb_grid(const Interval& iv, long order);

Real quad_eta(const RealFn& f, const ChebGrid& grid);
Real quad_eta_values(const std::vector<Real>& values, const ChebGrid& grid);

// Gauss–Legendre rule mapped to an interval; integrates against dx,
// exact for polynomials of degree < 2n.
struct LegendreGrid {
  Interval interval;
  std::vector<Real> nodes;
  std::vector<Real> weights;
  long order = 0;
};

LegendreGrid legendre_grid(const Interval& iv, long order);
Real quad_lebesgue(const RealFn& f, const Interval& iv, const PrecisionConfig& cfg);
Real quad_lebesgue_values(const std::vector<Real>& values, const LegendreGrid& grid);

// Chebyshev interpolation coefficients from values at ChebGrid nodes:
// f(x) = sum c_k T_k(t), t = (x - mid)/half. Exact for deg f < order.
std::vector<Real> cheb_coeffs(const std::vector<Real>& values, const ChebGrid& grid);
// Clenshaw evaluation of sum c_k T_k(t) at t in [-1, 1] or anywhere.
Real cheb_clenshaw(const std::vector<Real>& coeffs, const Real& t);
Complex cheb_clenshaw(const std::vector<Real>& coeffs, const Complex& t);

// Barycentric interpolation through ChebGrid nodes.
Real barycentric(const ChebGrid& grid, const std::vector<Real>& values, const Real& x);

// Dense LU solve with partial pivoting and row equilibration.
// a is row-major n x n, overwritten. Throws NumericError when singular
// at working precision.
std::vector<Real> lin_solve(std::vector<std::vector<Real>> a, std::vector<Real> rhs);

}  // namespace cbop
