#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cbop/numkit.hpp"

namespace cbop {

// Parse an arithmetic expression in x into a positive evaluator.
// Grammar: + - * / ^ (right assoc), unary -, sqrt/exp/ln/abs, parentheses,
// decimal literals (parsed at working precision), identifiers x and pi.
RealFn parse_density_expr(const std::string& expr);

enum class MeasureKind { Chebyshev, Lebesgue, Jacobi, Custom };

// Absolutely continuous measure on an interval:
//   d(mu) = (b-x)^alpha (x-a)^beta smooth(x) dx
// with smooth positive and analytic on [a,b]. The split keeps every
// integral either a d(eta)- or a dx-quadrature of an analytic integrand.
class Measure {
 public:
  static Measure chebyshev(const Interval& iv);
  static Measure lebesgue(const Interval& iv);
  // alpha, beta > -1; both half-odd integers >= -1/2 or both nonnegative
  // integers (otherwise no available rule integrates d(mu) to full accuracy).
  static Measure jacobi(const Interval& iv, const Real& alpha, const Real& beta);
  static Measure custom(const Interval& iv, const std::string& expr);
  // smooth positive analytic factor given directly (internal plumbing)
  static Measure with_smooth(const Interval& iv, Real alpha, Real beta, RealFn smooth,
                             std::string descriptor);

  const Interval& interval() const { return iv_; }
  const Real& alpha() const { return alpha_; }
  const Real& beta() const { return beta_; }
  MeasureKind kind() const { return kind_; }
  const std::string& descriptor() const { return descriptor_; }

  // Radon–Nikodym derivative w.r.t. dx. Finite only strictly inside when
  // an exponent is negative.
  Real density(const Real& x) const;
  // density w.r.t. d(eta): sqrt((b-x)(x-a)) * density(x)
  Real eta_density(const Real& x) const;
  Real smooth(const Real& x) const { return smooth_(x); }
  // Szego-function data: ln(eta_density) = p ln(b-x) + q ln(x-a) + ln smooth
  Real exponent_b() const { return alpha_ + Real(0.5); }
  Real exponent_a() const { return beta_ + Real(0.5); }

  // Discretization of integration against d(mu): sum w_i f(x_i) converges
  // geometrically for f analytic on [a,b].
  struct Rule {
    std::vector<Real> nodes;
    std::vector<Real> weights;
  };
  Rule rule(long order) const;

  Real mass(const PrecisionConfig& cfg) const;

 private:
  Measure(Interval iv, Real alpha, Real beta, RealFn smooth, MeasureKind kind,
          std::string descriptor);
  void check_route() const;

  Interval iv_;
  Real alpha_, beta_;
  RealFn smooth_;
  MeasureKind kind_;
  std::string descriptor_;
  bool eta_route_ = false;  // exponents + 1/2 are nonnegative integers
};

struct MeasurePair {
  Measure sigma1, sigma2;

  MeasurePair(Measure s1, Measure s2) : sigma1(std::move(s1)), sigma2(std::move(s2)) {
    if (!disjoint(sigma1.interval(), sigma2.interval()))
      throw NumericError("MeasurePair: closed intervals must be disjoint");
  }
};

struct NikishinSystem {
  MeasurePair pair;
  RealFn s12_density;  // x in Delta1 -> sigma2_hat(x) * sigma1'(x)
  RealFn s21_density;  // x in Delta2 -> sigma1_hat(x) * sigma2'(x)
};

// Markov (Cauchy) transform mu_hat(z) = integral d(mu)(x) / (z - x).
Complex markov_transform(const Measure& m, const Complex& z, const PrecisionConfig& cfg);
Real markov_transform(const Measure& m, const Real& z, const PrecisionConfig& cfg);

NikishinSystem nikishin(const MeasurePair& pair, const PrecisionConfig& cfg);

// integral of ln(mu') against d(eta); finite iff mu is in the Szego class.
Real szego_condition_value(const Measure& m, const PrecisionConfig& cfg);

}  // namespace cbop
