#pragma once

#include <doctest.h>

#include <string>

#include "cbop/numkit.hpp"

namespace cbop::testing {

inline PrecisionConfig quick_cfg(long bits = 128, long order = 64) {
  return PrecisionConfig::with_bits(bits, order);
}

inline bool close_abs(const Real& a, const Real& b, const Real& tol) {
  return abs(a - b) <= tol;
}

inline bool close_rel(const Real& a, const Real& b, const Real& tol) {
  return abs(a - b) <= tol * max(Real(1L), abs(b));
}

inline bool close_abs(const Complex& a, const Complex& b, const Real& tol) {
  return abs(a - b) <= tol;
}

inline std::string show(const Real& x) { return to_string(x, 24); }

// Test-only adaptive quadrature oracle: recursive interval bisection with a
// fixed-order Gauss-Legendre panel, refined until the two-half sum agrees.
inline Real adaptive_quad_oracle(const RealFn& f, const Interval& iv, const Real& tol,
                                 int depth = 0) {
  PrecisionConfig panel = PrecisionConfig::with_bits(
      static_cast<long>(detail::current_bits()), 24);
  Real whole = quad_lebesgue(f, iv, panel);
  Real m = iv.mid();
  Real left = quad_lebesgue(f, Interval(iv.a, m), panel);
  Real right = quad_lebesgue(f, Interval(m, iv.b), panel);
  if (depth > 40 || abs(whole - (left + right)) < tol) return left + right;
  Real half_tol = tol / Real(2L);
  return adaptive_quad_oracle(f, Interval(iv.a, m), half_tol, depth + 1) +
         adaptive_quad_oracle(f, Interval(m, iv.b), half_tol, depth + 1);
}

}  // namespace cbop::testing
