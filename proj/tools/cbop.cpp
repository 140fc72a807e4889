// cbop: construct Cauchy biorthogonal / multilevel Hermite-Pade systems,
// solve the associated equilibrium and boundary-value fixed points, and run
// the convergence verification suites.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cbop/biortho.hpp"
#include "cbop/config.hpp"
#include "cbop/fixedpoint.hpp"
#include "cbop/harness.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace cbop;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitClaim = 4;

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
  }
  fs::rename(tmp, path);
}

ordered_json poly_json(const Poly& p, int digits) {
  ordered_json j;
  j["interval"] = {to_string(p.interval.a, digits), to_string(p.interval.b, digits)};
  j["basis"] = "chebyshev";
  ordered_json c = ordered_json::array();
  for (const Real& v : p.coeffs) c.push_back(to_string(v, digits));
  j["coeffs"] = c;
  return j;
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string suite;
  long n = -1;
  long bits = 0;
  long quad_order = 0;
};

RunConfig load_config(const CommonOpts& opt) {
  RunConfig rc = opt.config_path.empty() ? RunConfig{} : parse_config_file(opt.config_path);
  if (opt.bits > 0) rc.precision.mantissa_bits = opt.bits;
  if (opt.quad_order > 0) rc.precision.quad_order = opt.quad_order;
  if (opt.bits > 0 || opt.quad_order > 0) {
    ScopedPrecision sp(rc.precision.mantissa_bits);
    rc.precision.fp_tol = pow2(-(rc.precision.mantissa_bits / 4));
  }
  if (!opt.out_dir.empty()) rc.out_dir = opt.out_dir;
  if (!opt.suite.empty()) rc.suite = opt.suite;
  try {
    rc.precision.validate();
  } catch (const NumericError& e) {
    throw ConfigError(e.what(), 0, 0);
  }
  return rc;
}

long pick_n(const CommonOpts& opt, const RunConfig& rc, long fallback) {
  if (opt.n >= 0) return opt.n;
  if (!rc.n_list.empty()) return rc.n_list.back();
  return fallback;
}

int cmd_equilibrium(const CommonOpts& opt) {
  RunConfig rc = load_config(opt);
  ScopedPrecision sp(rc.precision.mantissa_bits);
  MeasurePair pair = rc.pair();
  EquilibriumPair eq =
      vector_equilibrium(pair.sigma1.interval(), pair.sigma2.interval(), rc.precision);
  int d = render_digits(rc.precision);

  std::ostringstream csv;
  csv << "index,node1,lambda1,node2,lambda2\n";
  for (size_t j = 0; j < eq.lambda1.grid.nodes.size(); ++j)
    csv << j << "," << to_string(eq.lambda1.grid.nodes[j], d) << ","
        << to_string(eq.lambda1.values[j], d) << ","
        << to_string(eq.lambda2.grid.nodes[j], d) << ","
        << to_string(eq.lambda2.values[j], d) << "\n";
  write_atomic(fs::path(rc.out_dir) / "equilibrium.csv", csv.str());

  ordered_json j;
  j["digits"] = d;
  j["gamma1"] = to_string(eq.gamma1, d);
  j["gamma2"] = to_string(eq.gamma2, d);
  j["residual1"] = to_string(eq.residual1, d);
  j["residual2"] = to_string(eq.residual2, d);
  j["iterations"] = eq.iterations;
  j["mass1"] = to_string(eq.lambda1.mass, d);
  j["mass2"] = to_string(eq.lambda2.mass, d);
  write_atomic(fs::path(rc.out_dir) / "equilibrium.json", j.dump(2) + "\n");

  Real tol = rc.precision.equil_tol();
  bool ok = eq.residual1 < tol && eq.residual2 < tol;
  std::printf("equilibrium: gamma1=%s gamma2=%s residuals %s/%s -> %s\n",
              to_string(eq.gamma1, 10).c_str(), to_string(eq.gamma2, 10).c_str(),
              to_string(eq.residual1, 4).c_str(), to_string(eq.residual2, 4).c_str(),
              ok ? "ok" : "FAIL");
  return ok ? 0 : kExitConvergence;
}

int cmd_compute(const std::string& what, const CommonOpts& opt) {
  RunConfig rc = load_config(opt);
  ScopedPrecision sp(rc.precision.mantissa_bits);
  int d = render_digits(rc.precision);
  fs::path out(rc.out_dir);

  if (what == "biortho") {
    MeasurePair pair = rc.pair();
    long n = pick_n(opt, rc, 5);
    auto mat = biortho_pairing_matrix(pair, n, rc.precision);
    BiorthoPair bp = biorthogonal_pair(pair, n, rc.precision);
    Real off(0L), diag_min;
    bool first = true;
    for (long i = 0; i <= n; ++i)
      for (long jj = 0; jj <= n; ++jj) {
        if (i == jj) {
          Real a = abs(mat[i][i]);
          if (first || a < diag_min) diag_min = a;
          first = false;
        } else {
          off = max(off, abs(mat[i][jj]) / sqrt(abs(mat[i][i]) * abs(mat[jj][jj])));
        }
      }
    ordered_json j;
    j["digits"] = d;
    j["n"] = n;
    j["P"] = poly_json(bp.P, d);
    j["Q"] = poly_json(bp.Q, d);
    j["C_n"] = to_string(bp.C, d);
    j["offdiag_max_scaled"] = to_string(off, d);
    j["diag_min_abs"] = to_string(diag_min, d);
    ordered_json rows = ordered_json::array();
    for (long i = 0; i <= n; ++i) {
      ordered_json row = ordered_json::array();
      for (long jj = 0; jj <= n; ++jj) row.push_back(to_string(mat[i][jj], d));
      rows.push_back(row);
    }
    j["pairing_matrix"] = rows;
    write_atomic(out / "biortho.json", j.dump(2) + "\n");
    bool ok = off < rc.precision.resid_tol() * Real(1e6);
    std::printf("biortho n=%ld: scaled off-diagonal max %s -> %s\n", n,
                to_string(off, 4).c_str(), ok ? "ok" : "FAIL");
    return ok ? 0 : kExitConvergence;
  }

  if (what == "hp") {
    MeasurePair pair = rc.pair();
    long n = pick_n(opt, rc, 5);
    HPSystem sys = hp_system(pair, n, rc.precision);
    ordered_json j;
    j["digits"] = d;
    j["n"] = n;
    j["a0"] = poly_json(sys.a0, d);
    j["a1"] = poly_json(sys.a1, d);
    j["a2"] = poly_json(sys.a2, d);
    j["Q1"] = poly_json(sys.Q1, d);
    j["kappa1"] = to_string(sys.kappa1, d);
    j["kappa2"] = to_string(sys.kappa2, d);
    j["resid_int3"] = to_string(sys.resid_int3, d);
    j["resid_int4"] = to_string(sys.resid_int4, d);
    write_atomic(out / "hp.json", j.dump(2) + "\n");
    Real tol = rc.precision.resid_tol() * Real(1e6);
    bool ok = sys.resid_int3 < tol && sys.resid_int4 < tol;
    std::printf("hp n=%ld: residuals %s / %s -> %s\n", n, to_string(sys.resid_int3, 4).c_str(),
                to_string(sys.resid_int4, 4).c_str(), ok ? "ok" : "FAIL");
    return ok ? 0 : kExitConvergence;
  }

  if (what == "szego") {
    if (!rc.sigma1) throw ConfigError("compute szego requires [measure.sigma1]", 0, 0);
    SzegoFn g = szego_from_measure(*rc.sigma1, rc.precision);
    ordered_json j;
    j["digits"] = d;
    j["measure"] = rc.sigma1->descriptor();
    j["value_at_inf"] = to_string(g.value_at_inf, d);
    ordered_json pts = ordered_json::array();
    for (const Complex& z : exterior_ring(rc.sigma1->interval(), 2.0, 8)) {
      Complex v = szego_eval(g, z);
      pts.push_back({{"re_z", to_string(z.re, d)},
                     {"im_z", to_string(z.im, d)},
                     {"re", to_string(v.re, d)},
                     {"im", to_string(v.im, d)}});
    }
    j["ring_values"] = pts;
    write_atomic(out / "szego.json", j.dump(2) + "\n");
    std::printf("szego: G(inf) = %s\n", to_string(g.value_at_inf, 12).c_str());
    return 0;
  }

  if (what == "pade") {
    if (!rc.sigma1) throw ConfigError("compute pade requires [measure.sigma1]", 0, 0);
    long n = pick_n(opt, rc, 4);
    std::vector<Complex> zeros;
    if (rc.w_point) zeros.assign(2 * n, Complex(*rc.w_point));
    PadeApproximant pa = multipoint_pade(*rc.sigma1, zeros, Real(1L), n, rc.precision);
    Real worst(0L);
    ordered_json pts = ordered_json::array();
    for (const Complex& z : exterior_ring(rc.sigma1->interval(), 2.5, 8)) {
      Complex rem = pade_remainder(pa, *rc.sigma1, z, rc.precision);
      Complex ident = pade_remainder_integral(pa, *rc.sigma1, z, rc.precision);
      Real resid = abs(rem - ident) / abs(ident);
      worst = max(worst, resid);
      pts.push_back({{"re_z", to_string(z.re, d)},
                     {"im_z", to_string(z.im, d)},
                     {"remainder_abs", to_string(abs(rem), d)},
                     {"identity_residual", to_string(resid, d)}});
    }
    ordered_json j;
    j["digits"] = d;
    j["n"] = n;
    j["numerator"] = poly_json(pa.numerator, d);
    j["denominator"] = poly_json(pa.denominator, d);
    j["probes"] = pts;
    j["identity_max_residual"] = to_string(worst, d);
    write_atomic(out / "pade.json", j.dump(2) + "\n");
    bool ok = worst < rc.precision.resid_tol() * Real(1e9);
    std::printf("pade n=%ld: remainder identity residual %s -> %s\n", n,
                to_string(worst, 4).c_str(), ok ? "ok" : "FAIL");
    return ok ? 0 : kExitConvergence;
  }

  if (what == "gfix") {
    MeasurePair pair = rc.pair();
    ordered_json j;
    j["digits"] = d;
    Interval hull(min(pair.sigma1.interval().a, pair.sigma2.interval().a),
                  max(pair.sigma1.interval().b, pair.sigma2.interval().b));
    std::vector<Complex> probes = exterior_ring(hull, 1.6, 12);
    for (GSide side : {GSide::A, GSide::B}) {
      GPair g = fixed_point_G(pair, side, rc.precision);
      ordered_json js;
      js["iterations"] = g.iterations;
      js["boundary_residual"] = to_string(g.boundary_residual, d);
      for (const auto* fn : {&g.G1, &g.G2}) {
        ordered_json jf;
        jf["value_at_inf"] = to_string(fn->value_at_inf, d);
        ordered_json nodes = ordered_json::array(), lnh = ordered_json::array();
        for (size_t i = 0; i < fn->grid.nodes.size(); ++i) {
          nodes.push_back(to_string(fn->grid.nodes[i], d));
          lnh.push_back(to_string(fn->ln_h(fn->grid.nodes[i]), d));
        }
        jf["nodes"] = nodes;
        jf["ln_h"] = lnh;
        ordered_json pv = ordered_json::array();
        for (const Complex& z : probes) {
          Complex v = szego_eval(*fn, z);
          pv.push_back({{"re_z", to_string(z.re, d)},
                        {"im_z", to_string(z.im, d)},
                        {"re", to_string(v.re, d)},
                        {"im", to_string(v.im, d)}});
        }
        jf["probe_values"] = pv;
        js[fn == &g.G1 ? "G1" : "G2"] = jf;
      }
      j[side == GSide::A ? "A" : "B"] = js;
    }
    write_atomic(out / "gfix.json", j.dump(2) + "\n");
    std::printf("gfix: boundary-value fixed points written\n");
    return 0;
  }

  throw ConfigError("unknown compute target '" + what + "'", 0, 0);
}

int cmd_verify(const CommonOpts& opt) {
  RunConfig rc = load_config(opt);
  if (rc.suite.empty()) throw ConfigError("verify requires a suite name", 0, 0);
  ScopedPrecision sp(rc.precision.mantissa_bits);
  ConvergenceReport rep = run_suite(rc.suite, rc.precision);
  fs::path out(rc.out_dir);
  write_atomic(out / (rc.suite + ".json"), report_to_json(rep, rc.precision));
  write_atomic(out / (rc.suite + ".csv"), report_to_csv(rep, rc.precision));
  for (const ClaimCurve& c : rep.claims)
    std::printf("  [%s] %s\n", c.pass ? "pass" : "FAIL", c.name.c_str());
  for (auto& [name, ok] : rep.checks)
    std::printf("  [%s] %s\n", ok ? "pass" : "FAIL", name.c_str());
  if (!rep.pass) {
    std::fprintf(stderr, "suite %s failed:", rc.suite.c_str());
    for (const ClaimCurve& c : rep.claims)
      if (!c.pass) std::fprintf(stderr, " %s", c.name.c_str());
    for (auto& [name, ok] : rep.checks)
      if (!ok) std::fprintf(stderr, " %s", name.c_str());
    std::fprintf(stderr, "\n");
    return kExitClaim;
  }
  std::printf("suite %s: pass\n", rc.suite.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cauchy biorthogonal / Hermite-Pade asymptotics toolkit"};
  app.require_subcommand(1);

  CommonOpts opt;
  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "configuration file")
        ->envname("CBOP_CONFIG");
    sub->add_option("--out", opt.out_dir, "output directory")->envname("CBOP_OUT");
    sub->add_option("--bits", opt.bits, "mantissa bits override")->envname("CBOP_BITS");
    sub->add_option("--quad-order", opt.quad_order, "quadrature order override")
        ->envname("CBOP_QUAD_ORDER");
    sub->add_option("--n", opt.n, "degree override")->envname("CBOP_N");
  };

  CLI::App* eq = app.add_subcommand("equilibrium", "solve the vector equilibrium problem");
  add_common(eq);

  CLI::App* comp = app.add_subcommand("compute", "run one computation");
  std::string what;
  comp->add_option("what", what, "biortho | hp | szego | pade | gfix")->required();
  add_common(comp);

  CLI::App* ver = app.add_subcommand("verify", "run a verification suite");
  add_common(ver);
  ver->add_option("--suite", opt.suite, "bundled suite name")->envname("CBOP_SUITE");

  app.add_subcommand("suites", "list bundled suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (app.got_subcommand("equilibrium")) return cmd_equilibrium(opt);
    if (app.got_subcommand("compute")) return cmd_compute(what, opt);
    if (app.got_subcommand("verify")) return cmd_verify(opt);
    if (app.got_subcommand("suites")) {
      for (const std::string& s : bundled_scenario_names()) std::printf("%s\n", s.c_str());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitConvergence;
  }
  return 0;
}
