#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

namespace cbop {

// Thread-local working precision (binary mantissa bits) used by every
// newly constructed Real. Set it once per entry point via ScopedPrecision.
namespace detail {
mpfr_prec_t current_bits();
void set_current_bits(mpfr_prec_t bits);
}  // namespace detail

class ScopedPrecision {
 public:
  explicit ScopedPrecision(long bits) : saved_(detail::current_bits()) {
    detail::set_current_bits(static_cast<mpfr_prec_t>(bits));
  }
  ~ScopedPrecision() { detail::set_current_bits(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  mpfr_prec_t saved_;
};

// Value-semantic arbitrary-precision real. All operations round to nearest
// at the current working precision; results are deterministic functions of
// the operands and that precision.
class Real {
 public:
  Real() { mpfr_init2(v_, detail::current_bits()); mpfr_set_zero(v_, 1); }
  Real(long x) : Real() { mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(int x) : Real(static_cast<long>(x)) {}
  Real(unsigned long x) : Real() { mpfr_set_ui(v_, x, MPFR_RNDN); }
  Real(double x) : Real() { mpfr_set_d(v_, x, MPFR_RNDN); }
  explicit Real(const std::string& s) : Real() {
    mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN);
  }

  Real(const Real& o) {
    mpfr_init2(v_, detail::current_bits());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    v_[0] = o.v_[0];
    mpfr_init2(o.v_, detail::current_bits());
    mpfr_set_zero(o.v_, 1);
  }
  Real& operator=(const Real& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend Real operator+(const Real& a, const Real& b) { Real r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, const Real& b) { Real r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, const Real& b) { Real r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, const Real& b) { Real r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a) { Real r; mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

Real abs(const Real& a);
Real sqrt(const Real& a);
Real exp(const Real& a);
Real log(const Real& a);
Real pow(const Real& a, const Real& b);
Real pow_int(const Real& a, long k);
Real sin(const Real& a);
Real cos(const Real& a);
Real atan2(const Real& y, const Real& x);
Real hypot(const Real& x, const Real& y);
Real floor(const Real& a);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
Real const_pi();
// 2^k for integer k (exact)
Real pow2(long k);

// Decimal string with enough digits to round-trip the current precision,
// rendered deterministically ("digits10 = bits*log10(2) + 3").
std::string to_string(const Real& a);
std::string to_string(const Real& a, int digits);

struct Complex {
  Real re, im;

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im(0L) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(double r) : re(r), im(0L) {}
  Complex(double r, double i) : re(r), im(i) {}

  bool is_finite() const { return re.is_finite() && im.is_finite(); }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b);
  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) { *this = *this * o; return *this; }
  Complex& operator/=(const Complex& o) { *this = *this / o; return *this; }
};

Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real arg(const Complex& z);   // principal, in (-pi, pi]
Complex sqrt(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);  // principal branch
Complex pow(const Complex& z, const Real& p);
Complex pow_int(const Complex& z, long k);
Complex inv(const Complex& z);

}  // namespace cbop
