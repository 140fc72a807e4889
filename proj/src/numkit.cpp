#include "cbop/numkit.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace cbop {

bool disjoint(const Interval& d1, const Interval& d2) {
  return d1.b < d2.a || d2.b < d1.a;
}

Real gap(const Interval& d1, const Interval& d2) {
  if (d1.b < d2.a) return d2.a - d1.b;
  if (d2.b < d1.a) return d1.a - d2.b;
  return Real(0L);
}

namespace {

// Grid caches keyed by (endpoints, order, bits). Grid construction is a
// pure function of the key, so concurrent recomputation is harmless; the
// mutex only guards the map itself.
struct GridKey {
  std::string a, b;
  long order;
  long bits;
  bool operator<(const GridKey& o) const {
    return std::tie(a, b, order, bits) < std::tie(o.a, o.b, o.order, o.bits);
  }
};

std::mutex g_cheb_mutex;
std::map<GridKey, ChebGrid> g_cheb_cache;
std::mutex g_leg_mutex;
std::map<GridKey, LegendreGrid> g_leg_cache;

GridKey make_key(const Interval& iv, long order) {
  return GridKey{to_string(iv.a), to_string(iv.b), order,
                 static_cast<long>(detail::current_bits())};
}

ChebGrid build_cheb(const Interval& iv, long order) {
  ChebGrid g;
  g.interval = iv;
  g.order = order;
  g.nodes.reserve(order);
  g.theta.reserve(order);
  g.weights.reserve(order);
  Real pi = const_pi();
  Real mid = iv.mid(), half = iv.half();
  Real w = pi / Real(order);
  for (long j = 0; j < order; ++j) {
    // ascending nodes: angles descend from near pi to near 0
    Real th = pi * Real(2 * (order - 1 - j) + 1) / Real(2 * order);
    g.theta.push_back(th);
    g.nodes.push_back(mid + half * cos(th));
    g.weights.push_back(w);
  }
  return g;
}

LegendreGrid build_legendre(const Interval& iv, long order) {
  // Newton from the classical Chebyshev-angle initial guess; converges
  // quadratically, so ~log2(bits) iterations suffice.
  LegendreGrid g;
  g.interval = iv;
  g.order = order;
  g.nodes.resize(order);
  g.weights.resize(order);
  Real pi = const_pi();
  Real mid = iv.mid(), half = iv.half();
  long n = order;
  Real tol = pow2(-(static_cast<long>(detail::current_bits()) - 8));
  for (long j = 0; j < (n + 1) / 2; ++j) {
    Real x = cos(pi * (Real(j) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp(0L);
    for (int it = 0; it < 200; ++it) {
      // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
      Real p0(1L), p1 = x;
      for (long k = 1; k < n; ++k) {
        Real p2 = (Real(2 * k + 1) * x * p1 - Real(k) * p0) / Real(k + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = Real(n) * (x * p1 - p0) / (x * x - Real(1L));
      Real step = p1 / dp;
      x -= step;
      if (abs(step) < tol) break;
    }
    Real w = Real(2L) / ((Real(1L) - x * x) * dp * dp);
    g.nodes[j] = mid - half * x;            // x descends with j; store ascending
    g.weights[j] = half * w;
    g.nodes[n - 1 - j] = mid + half * x;
    g.weights[n - 1 - j] = half * w;
  }
  return g;
}

}  // namespace

ChebGrid cheb_grid(const Interval& iv, long order) {
  if (order < 1) throw NumericError("cheb_grid: order must be positive");
  GridKey key = make_key(iv, order);
  {
    std::lock_guard<std::mutex> lock(g_cheb_mutex);
    auto it = g_cheb_cache.find(key);
    if (it != g_cheb_cache.end()) return it->second;
  }
  ChebGrid g = build_cheb(iv, order);
  std::lock_guard<std::mutex> lock(g_cheb_mutex);
  return g_cheb_cache.emplace(key, std::move(g)).first->second;
}

ChebGrid cheb_grid(const Interval& iv, const PrecisionConfig& cfg) {
  cfg.validate();
  return cheb_grid(iv, cfg.quad_order);
}

Real quad_eta(const RealFn& f, const ChebGrid& grid) {
  Real s(0L);
  for (size_t j = 0; j < grid.nodes.size(); ++j) {
    Real v = f(grid.nodes[j]);
    if (!v.is_finite()) throw NumericError("quad_eta: non-finite integrand value");
    s += v;
  }
  return s * grid.weights[0];
}

Real quad_eta_values(const std::vector<Real>& values, const ChebGrid& grid) {
  if (values.size() != grid.nodes.size())
    throw NumericError("quad_eta_values: size mismatch");
  Real s(0L);
  for (const Real& v : values) s += v;
  return s * grid.weights[0];
}

LegendreGrid legendre_grid(const Interval& iv, long order) {
  if (order < 1) throw NumericError("legendre_grid: order must be positive");
  GridKey key = make_key(iv, order);
  {
    std::lock_guard<std::mutex> lock(g_leg_mutex);
    auto it = g_leg_cache.find(key);
    if (it != g_leg_cache.end()) return it->second;
  }
  LegendreGrid g = build_legendre(iv, order);
  std::lock_guard<std::mutex> lock(g_leg_mutex);
  return g_leg_cache.emplace(key, std::move(g)).first->second;
}

Real quad_lebesgue(const RealFn& f, const Interval& iv, const PrecisionConfig& cfg) {
  cfg.validate();
  LegendreGrid g = legendre_grid(iv, cfg.quad_order);
  Real s(0L);
  for (long j = 0; j < g.order; ++j) {
    Real v = f(g.nodes[j]);
    if (!v.is_finite()) throw NumericError("quad_lebesgue: non-finite integrand value");
    s += g.weights[j] * v;
  }
  return s;
}

Real quad_lebesgue_values(const std::vector<Real>& values, const LegendreGrid& grid) {
  if (values.size() != grid.nodes.size())
    throw NumericError("quad_lebesgue_values: size mismatch");
  Real s(0L);
  for (size_t j = 0; j < values.size(); ++j) s += grid.weights[j] * values[j];
  return s;
}

std::vector<Real> cheb_coeffs(const std::vector<Real>& values, const ChebGrid& grid) {
  long n = grid.order;
  if (static_cast<long>(values.size()) != n)
    throw NumericError("cheb_coeffs: size mismatch");
  std::vector<Real> c(n, Real(0L));
  for (long k = 0; k < n; ++k) {
    Real s(0L);
    for (long j = 0; j < n; ++j) s += values[j] * cos(Real(k) * grid.theta[j]);
    c[k] = s * Real(k == 0 ? 1 : 2) / Real(n);
  }
  return c;
}

Real cheb_clenshaw(const std::vector<Real>& coeffs, const Real& t) {
  Real b1(0L), b2(0L);
  Real two_t = Real(2L) * t;
  for (size_t i = coeffs.size(); i-- > 1;) {
    Real b0 = coeffs[i] + two_t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs.empty() ? Real(0L) : coeffs[0] + t * b1 - b2;
}

Complex cheb_clenshaw(const std::vector<Real>& coeffs, const Complex& t) {
  Complex b1(Real(0L)), b2(Real(0L));
  Complex two_t = Complex(Real(2L)) * t;
  for (size_t i = coeffs.size(); i-- > 1;) {
    Complex b0 = Complex(coeffs[i]) + two_t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs.empty() ? Complex(Real(0L)) : Complex(coeffs[0]) + t * b1 - b2;
}

Real barycentric(const ChebGrid& grid, const std::vector<Real>& values, const Real& x) {
  // Chebyshev–Gauss barycentric weights: (-1)^j sin(theta_j)
  long n = grid.order;
  Real num(0L), den(0L);
  for (long j = 0; j < n; ++j) {
    Real d = x - grid.nodes[j];
    if (d.is_zero()) return values[j];
    Real w = sin(grid.theta[j]);
    if ((n - 1 - j) % 2 == 1) w = -w;  // node order is angle-reversed
    Real t = w / d;
    num += t * values[j];
    den += t;
  }
  return num / den;
}

std::vector<Real> lin_solve(std::vector<std::vector<Real>> a, std::vector<Real> rhs) {
  size_t n = a.size();
  if (n == 0) return {};
  for (auto& row : a)
    if (row.size() != n) throw NumericError("lin_solve: non-square matrix");
  if (rhs.size() != n) throw NumericError("lin_solve: rhs size mismatch");

  // row equilibration: Gram matrices here are strongly graded
  for (size_t i = 0; i < n; ++i) {
    Real m(0L);
    for (size_t j = 0; j < n; ++j) m = max(m, abs(a[i][j]));
    if (m.is_zero()) throw NumericError("lin_solve: zero row (singular system)");
    for (size_t j = 0; j < n; ++j) a[i][j] /= m;
    rhs[i] /= m;
  }

  std::vector<size_t> piv(n);
  for (size_t i = 0; i < n; ++i) piv[i] = i;
  for (size_t k = 0; k < n; ++k) {
    size_t p = k;
    Real best = abs(a[k][k]);
    for (size_t i = k + 1; i < n; ++i) {
      Real v = abs(a[i][k]);
      if (v > best) { best = v; p = i; }
    }
    if (best.is_zero()) throw NumericError("lin_solve: singular system at working precision");
    if (p != k) { std::swap(a[p], a[k]); std::swap(rhs[p], rhs[k]); }
    for (size_t i = k + 1; i < n; ++i) {
      Real f = a[i][k] / a[k][k];
      if (f.is_zero()) continue;
      for (size_t j = k + 1; j < n; ++j) a[i][j] -= f * a[k][j];
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<Real> x(n, Real(0L));
  for (size_t i = n; i-- > 0;) {
    Real s = rhs[i];
    for (size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace cbop
