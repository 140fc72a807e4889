#include "cbop/real.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace cbop {
namespace detail {

namespace {
thread_local mpfr_prec_t g_bits = 256;
}

mpfr_prec_t current_bits() { return g_bits; }
void set_current_bits(mpfr_prec_t bits) { g_bits = bits < MPFR_PREC_MIN ? MPFR_PREC_MIN : bits; }

}  // namespace detail

#define CBOP_UNARY(name, fn)                       \
  Real name(const Real& a) {                       \
    Real r;                                        \
    fn(r.raw(), a.raw(), MPFR_RNDN);               \
    return r;                                      \
  }

CBOP_UNARY(abs, mpfr_abs)
CBOP_UNARY(sqrt, mpfr_sqrt)
CBOP_UNARY(exp, mpfr_exp)
CBOP_UNARY(log, mpfr_log)
CBOP_UNARY(sin, mpfr_sin)
CBOP_UNARY(cos, mpfr_cos)
#undef CBOP_UNARY

Real floor(const Real& a) {
  Real r;
  mpfr_floor(r.raw(), a.raw());
  return r;
}

Real pow(const Real& a, const Real& b) {
  Real r;
  mpfr_pow(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

Real pow_int(const Real& a, long k) {
  Real r;
  mpfr_pow_si(r.raw(), a.raw(), k, MPFR_RNDN);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r;
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real hypot(const Real& x, const Real& y) {
  Real r;
  mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return a < b ? a : b; }

Real const_pi() {
  Real r;
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

Real pow2(long k) {
  Real r(1L);
  mpfr_mul_2si(r.raw(), r.raw(), k, MPFR_RNDN);
  return r;
}

std::string to_string(const Real& a, int digits) {
  if (!a.is_finite()) return mpfr_nan_p(a.raw()) ? "nan" : (a.sign() > 0 ? "inf" : "-inf");
  std::vector<char> buf(static_cast<size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, a.raw());
  return std::string(buf.data());
}

std::string to_string(const Real& a) {
  int digits = static_cast<int>(
      static_cast<double>(mpfr_get_prec(a.raw())) * 0.3010299956639812) + 3;
  return to_string(a, digits);
}

Complex operator/(const Complex& a, const Complex& b) {
  Real d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

Complex conj(const Complex& z) { return {z.re, -z.im}; }
Real abs(const Complex& z) { return hypot(z.re, z.im); }
Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real arg(const Complex& z) { return atan2(z.im, z.re); }

Complex sqrt(const Complex& z) {
  if (z.im.is_zero()) {
    if (z.re.sign() >= 0) return {sqrt(z.re), Real(0L)};
    // negative real axis: principal branch, im >= 0
    return {Real(0L), sqrt(-z.re)};
  }
  Real m = abs(z);
  Real u = sqrt((m + z.re) / Real(2L));
  Real v = sqrt((m - z.re) / Real(2L));
  if (z.im.sign() < 0) v = -v;
  return {u, v};
}

Complex exp(const Complex& z) {
  Real m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

Complex log(const Complex& z) { return {log(abs(z)), arg(z)}; }

Complex pow(const Complex& z, const Real& p) {
  if (z.im.is_zero() && z.re.sign() > 0) return {pow(z.re, p), Real(0L)};
  return exp(Complex(p) * log(z));
}

Complex pow_int(const Complex& z, long k) {
  if (k == 0) return Complex(Real(1L));
  bool neg = k < 0;
  unsigned long e = neg ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  Complex base = z, acc(Real(1L));
  while (e) {
    if (e & 1UL) acc *= base;
    base *= base;
    e >>= 1UL;
  }
  return neg ? inv(acc) : acc;
}

Complex inv(const Complex& z) {
  Real d = norm(z);
  return {z.re / d, -z.im / d};
}

}  // namespace cbop
