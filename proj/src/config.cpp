#include "cbop/config.hpp"

#include <fstream>
#include <sstream>

namespace cbop {

namespace {

struct KeyValue {
  std::string value;
  int line;
  int column;
};

using Section = std::map<std::string, KeyValue>;

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

Real parse_real(const std::string& tok, int line, int col) {
  if (tok.rfind("2^", 0) == 0) {
    try {
      return pow2(std::stol(tok.substr(2)));
    } catch (...) {
      throw ConfigError("malformed power-of-two literal '" + tok + "'", line, col);
    }
  }
  Real v(tok);
  if (!v.is_finite() && tok != "inf" && tok != "-inf")
    throw ConfigError("malformed number '" + tok + "'", line, col);
  return v;
}

long parse_long(const std::string& tok, int line, int col) {
  try {
    size_t used = 0;
    long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (...) {
    throw ConfigError("malformed integer '" + tok + "'", line, col);
  }
}

Measure parse_measure(const Section& sec, const std::string& name) {
  auto it = sec.find("interval");
  if (it == sec.end()) throw ConfigError("measure " + name + " missing 'interval'", 0, 0);
  std::vector<std::string> ab = split_ws(it->second.value);
  if (ab.size() != 2)
    throw ConfigError("interval expects two endpoints", it->second.line, it->second.column);
  Real a = parse_real(ab[0], it->second.line, it->second.column);
  Real b = parse_real(ab[1], it->second.line, it->second.column);
  if (!(a < b))
    throw ConfigError("malformed interval (a >= b)", it->second.line, it->second.column);
  Interval iv(a, b);

  auto kit = sec.find("kind");
  if (kit == sec.end()) throw ConfigError("measure " + name + " missing 'kind'", 0, 0);
  std::vector<std::string> toks = split_ws(kit->second.value);
  const std::string& kind = toks.empty() ? std::string() : toks[0];
  int line = kit->second.line, col = kit->second.column;
  if (kind == "lebesgue") return Measure::lebesgue(iv);
  if (kind == "chebyshev") return Measure::chebyshev(iv);
  if (kind == "jacobi") {
    if (toks.size() != 3) throw ConfigError("jacobi expects two exponents", line, col);
    try {
      return Measure::jacobi(iv, parse_real(toks[1], line, col),
                             parse_real(toks[2], line, col));
    } catch (const NumericError& e) {
      throw ConfigError(e.what(), line, col);
    }
  }
  if (kind == "expr") {
    std::string expr = trim(kit->second.value.substr(kit->second.value.find("expr") + 4));
    try {
      return Measure::custom(iv, expr);
    } catch (const NumericError& e) {
      throw ConfigError(e.what(), line, col);
    }
  }
  throw ConfigError("unknown measure kind '" + kind + "'", line, col);
}

}  // namespace

MeasurePair RunConfig::pair() const {
  if (!sigma1 || !sigma2)
    throw NumericError("configuration does not define both measures");
  return MeasurePair(*sigma1, *sigma2);
}

RunConfig parse_config_text(const std::string& text) {
  std::map<std::string, Section> sections;
  std::istringstream is(text);
  std::string raw;
  std::string current;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("unterminated section header", lineno, static_cast<int>(raw.size()));
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) throw ConfigError("empty section name", lineno, 1);
      sections[current];
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno, 1);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno, 1);
    if (current.empty()) throw ConfigError("key outside any section", lineno, 1);
    int col = static_cast<int>(raw.find(key)) + 1;
    sections[current][key] = KeyValue{value, lineno, col};
  }

  RunConfig rc;
  {
    ScopedPrecision sp(256);
    if (auto it = sections.find("precision"); it != sections.end()) {
      const Section& sec = it->second;
      if (auto k = sec.find("mantissa_bits"); k != sec.end())
        rc.precision.mantissa_bits = parse_long(k->second.value, k->second.line, k->second.column);
      if (auto k = sec.find("quad_order"); k != sec.end())
        rc.precision.quad_order = parse_long(k->second.value, k->second.line, k->second.column);
      if (auto k = sec.find("max_iter"); k != sec.end())
        rc.precision.max_iter = parse_long(k->second.value, k->second.line, k->second.column);
      ScopedPrecision sp2(rc.precision.mantissa_bits);
      rc.precision.fp_tol = pow2(-(rc.precision.mantissa_bits / 4));
      if (auto k = sec.find("fp_tol"); k != sec.end())
        rc.precision.fp_tol = parse_real(k->second.value, k->second.line, k->second.column);
    }
  }
  ScopedPrecision sp(rc.precision.mantissa_bits);
  try {
    rc.precision.validate();
  } catch (const NumericError& e) {
    throw ConfigError(e.what(), 0, 0);
  }

  if (auto it = sections.find("measure.sigma1"); it != sections.end())
    rc.sigma1 = parse_measure(it->second, "sigma1");
  if (auto it = sections.find("measure.sigma2"); it != sections.end())
    rc.sigma2 = parse_measure(it->second, "sigma2");
  if (rc.sigma1 && rc.sigma2 &&
      !disjoint(rc.sigma1->interval(), rc.sigma2->interval())) {
    const Section& sec = sections["measure.sigma2"];
    auto k = sec.find("interval");
    throw ConfigError("measure intervals must be disjoint", k->second.line, k->second.column);
  }

  if (auto it = sections.find("run"); it != sections.end()) {
    const Section& sec = it->second;
    if (auto k = sec.find("n_list"); k != sec.end())
      for (const std::string& tok : split_ws(k->second.value))
        rc.n_list.push_back(parse_long(tok, k->second.line, k->second.column));
    if (auto k = sec.find("suite"); k != sec.end()) rc.suite = k->second.value;
    if (auto k = sec.find("out"); k != sec.end()) rc.out_dir = k->second.value;
    if (auto k = sec.find("w_point"); k != sec.end())
      rc.w_point = parse_real(k->second.value, k->second.line, k->second.column);
  }
  for (long n : rc.n_list)
    if (n < 0) throw ConfigError("n_list entries must be nonnegative", 0, 0);
  return rc;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'", 0, 0);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace cbop
