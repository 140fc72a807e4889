#include "cbop/measures.hpp"

#include <cctype>
#include <utility>

namespace cbop {

// ---------------------------------------------------------------------------
// density expression parser (recursive descent)

namespace {

struct ExprParser {
  const std::string& s;
  size_t pos = 0;

  explicit ExprParser(const std::string& str) : s(str) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw NumericError("density expression: " + msg + " at offset " + std::to_string(pos));
  }
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) { ++pos; return true; }
    return false;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  using Node = std::function<Real(const Real&)>;

  Node parse() {
    Node e = expr();
    skip_ws();
    if (pos != s.size()) fail("trailing input");
    return e;
  }

  Node expr() {
    Node lhs = term();
    for (;;) {
      if (eat('+')) { Node rhs = term(); lhs = [lhs, rhs](const Real& x) { return lhs(x) + rhs(x); }; }
      else if (eat('-')) { Node rhs = term(); lhs = [lhs, rhs](const Real& x) { return lhs(x) - rhs(x); }; }
      else return lhs;
    }
  }

  Node term() {
    Node lhs = factor();
    for (;;) {
      if (eat('*')) { Node rhs = factor(); lhs = [lhs, rhs](const Real& x) { return lhs(x) * rhs(x); }; }
      else if (eat('/')) { Node rhs = factor(); lhs = [lhs, rhs](const Real& x) { return lhs(x) / rhs(x); }; }
      else return lhs;
    }
  }

  Node factor() {
    Node base = unary();
    if (eat('^')) {
      Node e = factor();  // right associative
      return [base, e](const Real& x) { return pow(base(x), e(x)); };
    }
    return base;
  }

  Node unary() {
    if (eat('-')) {
      Node n = unary();
      return [n](const Real& x) { return -n(x); };
    }
    return primary();
  }

  Node primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      Node e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character");
  }

  Node number() {
    size_t start = pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
            s[pos] == 'e' || s[pos] == 'E' ||
            ((s[pos] == '+' || s[pos] == '-') && pos > start &&
             (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
      ++pos;
    std::string lit = s.substr(start, pos - start);
    return [lit](const Real&) { return Real(lit); };
  }

  Node identifier() {
    size_t start = pos;
    while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
    std::string name = s.substr(start, pos - start);
    if (name == "x") return [](const Real& x) { return x; };
    if (name == "pi") return [](const Real&) { return const_pi(); };
    if (!eat('(')) fail("expected '(' after function name '" + name + "'");
    Node arg = expr();
    if (!eat(')')) fail("expected ')'");
    if (name == "sqrt") return [arg](const Real& x) { return sqrt(arg(x)); };
    if (name == "exp") return [arg](const Real& x) { return exp(arg(x)); };
    if (name == "ln") return [arg](const Real& x) { return log(arg(x)); };
    if (name == "abs") return [arg](const Real& x) { return abs(arg(x)); };
    fail("unknown function '" + name + "'");
  }
};

}  // namespace

RealFn parse_density_expr(const std::string& expr) {
  ExprParser p(expr);
  return p.parse();
}

// ---------------------------------------------------------------------------
// Measure

namespace {

bool is_nonneg_integer(const Real& x) {
  return x >= Real(0L) && x == floor(x);
}

}  // namespace

Measure::Measure(Interval iv, Real alpha, Real beta, RealFn smooth, MeasureKind kind,
                 std::string descriptor)
    : iv_(std::move(iv)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      smooth_(std::move(smooth)),
      kind_(kind),
      descriptor_(std::move(descriptor)) {
  check_route();
}

void Measure::check_route() const {
  if (!(alpha_ > Real(-1L)) || !(beta_ > Real(-1L)))
    throw NumericError("Measure: exponents must exceed -1 (finite moments)");
  if (is_nonneg_integer(alpha_ + Real(0.5)) && is_nonneg_integer(beta_ + Real(0.5))) {
    const_cast<Measure*>(this)->eta_route_ = true;
  } else if (is_nonneg_integer(alpha_) && is_nonneg_integer(beta_)) {
    const_cast<Measure*>(this)->eta_route_ = false;
  } else {
    throw NumericError(
        "Measure: exponent pair (" + to_string(alpha_, 6) + ", " + to_string(beta_, 6) +
        ") has no full-accuracy quadrature rule; use half-odd or integer exponents");
  }
}

Measure Measure::chebyshev(const Interval& iv) {
  Real inv_pi = Real(1L) / const_pi();
  return Measure(iv, Real(-0.5), Real(-0.5),
                 [inv_pi](const Real&) { return inv_pi; }, MeasureKind::Chebyshev,
                 "chebyshev");
}

Measure Measure::lebesgue(const Interval& iv) {
  return Measure(iv, Real(0L), Real(0L), [](const Real&) { return Real(1L); },
                 MeasureKind::Lebesgue, "lebesgue");
}

Measure Measure::jacobi(const Interval& iv, const Real& alpha, const Real& beta) {
  return Measure(iv, alpha, beta, [](const Real&) { return Real(1L); },
                 MeasureKind::Jacobi,
                 "jacobi " + to_string(alpha, 20) + " " + to_string(beta, 20));
}

Measure Measure::custom(const Interval& iv, const std::string& expr) {
  return Measure(iv, Real(0L), Real(0L), parse_density_expr(expr), MeasureKind::Custom,
                 "expr " + expr);
}

Measure Measure::with_smooth(const Interval& iv, Real alpha, Real beta, RealFn smooth,
                             std::string descriptor) {
  return Measure(iv, std::move(alpha), std::move(beta), std::move(smooth),
                 MeasureKind::Custom, std::move(descriptor));
}

Real Measure::density(const Real& x) const {
  Real f = smooth_(x);
  if (!alpha_.is_zero()) f *= pow(iv_.b - x, alpha_);
  if (!beta_.is_zero()) f *= pow(x - iv_.a, beta_);
  return f;
}

Real Measure::eta_density(const Real& x) const {
  return sqrt((iv_.b - x) * (x - iv_.a)) * density(x);
}

Measure::Rule Measure::rule(long order) const {
  Rule r;
  if (eta_route_) {
    ChebGrid g = cheb_grid(iv_, order);
    r.nodes = g.nodes;
    r.weights.reserve(order);
    for (long j = 0; j < order; ++j)
      r.weights.push_back(g.weights[j] * eta_density(g.nodes[j]));
  } else {
    LegendreGrid g = legendre_grid(iv_, order);
    r.nodes = g.nodes;
    r.weights.reserve(order);
    for (long j = 0; j < order; ++j)
      r.weights.push_back(g.weights[j] * density(g.nodes[j]));
  }
  for (const Real& w : r.weights)
    if (!w.is_finite() || w.sign() < 0)
      throw NumericError("Measure: density not positive/finite at a quadrature node");
  return r;
}

Real Measure::mass(const PrecisionConfig& cfg) const {
  Rule r = rule(cfg.quad_order);
  Real s(0L);
  for (const Real& w : r.weights) s += w;
  return s;
}

// ---------------------------------------------------------------------------

Complex markov_transform(const Measure& m, const Complex& z, const PrecisionConfig& cfg) {
  cfg.validate();
  if (z.im.is_zero() && m.interval().contains(z.re))
    throw NumericError("markov_transform: z on the closed interval");
  Measure::Rule r = m.rule(cfg.quad_order);
  Complex s(Real(0L));
  for (size_t j = 0; j < r.nodes.size(); ++j)
    s += Complex(r.weights[j]) / (z - Complex(r.nodes[j]));
  return s;
}

Real markov_transform(const Measure& m, const Real& z, const PrecisionConfig& cfg) {
  return markov_transform(m, Complex(z), cfg).re;
}

NikishinSystem nikishin(const MeasurePair& pair, const PrecisionConfig& cfg) {
  cfg.validate();
  Measure s1 = pair.sigma1, s2 = pair.sigma2;
  RealFn s12 = [s1, s2, cfg](const Real& x) {
    return markov_transform(s2, x, cfg) * s1.density(x);
  };
  RealFn s21 = [s1, s2, cfg](const Real& x) {
    return markov_transform(s1, x, cfg) * s2.density(x);
  };
  // sign invariant: sigma2_hat has no zero on Delta1 (and vice versa)
  ChebGrid g1 = cheb_grid(pair.sigma1.interval(), cfg.quad_order);
  int sign = 0;
  for (const Real& x : g1.nodes) {
    Real v = markov_transform(s2, x, cfg);
    int sv = v.sign();
    if (sv == 0) throw NumericError("nikishin: sigma2_hat vanishes on Delta1");
    if (sign == 0) sign = sv;
    if (sv != sign) throw NumericError("nikishin: s12 density changes sign on Delta1");
  }
  return NikishinSystem{pair, std::move(s12), std::move(s21)};
}

Real szego_condition_value(const Measure& m, const PrecisionConfig& cfg) {
  cfg.validate();
  const Interval& iv = m.interval();
  ChebGrid g = cheb_grid(iv, cfg.quad_order);
  // ln density = alpha ln(b-x) + beta ln(x-a) + ln smooth;
  // closed form: integral of ln(b-x) (or ln(x-a)) d(eta) = pi ln((b-a)/4)
  Real pi = const_pi();
  Real singular = (m.alpha() + m.beta()) * pi * log((iv.b - iv.a) / Real(4L));
  Real smooth_part = quad_eta(
      [&m](const Real& x) {
        Real v = m.smooth(x);
        if (!(v > Real(0L)))
          throw NumericError("szego_condition_value: density not positive at a node");
        return log(v);
      },
      g);
  Real total = singular + smooth_part;
  if (!total.is_finite())
    throw NumericError("szego_condition_value: Szego condition fails (non-finite integral)");
  return total;
}

}  // namespace cbop
