#pragma once

#include <optional>

#include "cbop/fixedpoint.hpp"

namespace cbop {

struct ClaimCurve {
  std::string name;
  std::vector<long> n_values;
  std::vector<Real> errors;  // max relative error over the probe set
  Real fitted_rate;          // LS slope of ln(err) in n over the last half
  bool pass = false;
  std::string note;
};

struct ConvergenceReport {
  std::string scenario;
  std::vector<ClaimCurve> claims;
  std::vector<std::pair<std::string, Real>> diagnostics;
  std::vector<std::pair<std::string, bool>> checks;  // named pass/fail gates
  bool pass = false;
};

// A verification scenario: measures, the n ladder, and precision. The
// varying-measure scenarios carry a denominator family and the external
// field identifying Phi and C; biortho scenarios carry the measure pair.
struct Scenario {
  std::string name;
  PrecisionConfig cfg;
  std::vector<long> n_list;
  Real claim_tol;

  std::optional<MeasurePair> pair;
  std::optional<VaryingMeasureSeq> seq;
  std::optional<FieldSource> field;
  // orthonormality against |Phi_tau^{2n}| with tau supported on the
  // interval itself (equilibrium constant gamma = 0, C = 1)
  bool tau_weighted = false;
  std::optional<ChebDensity> tau;
  bool pade_classical_rate = false;
  // measures whose Szego data vanishes like sqrt at the endpoints converge
  // at the intrinsic 1/n rate; gate those claims on trend with a loose cap
  bool jacobi_rate = false;

  Scenario() : claim_tol(1e-3) {}
};

std::vector<std::string> bundled_scenario_names();
Scenario bundled_scenario(const std::string& name, const PrecisionConfig& cfg);

ConvergenceReport verify_varying(const Scenario& sc);
ConvergenceReport verify_pade(const Scenario& sc);
ConvergenceReport verify_biortho(const Scenario& sc);
ConvergenceReport verify_fixed_point(const Scenario& sc);
ConvergenceReport verify_crosschecks(const Scenario& sc);

// dispatch by bundled suite name
ConvergenceReport run_suite(const std::string& name, const PrecisionConfig& cfg);

// decimal digit count used when rendering values at this precision
int render_digits(const PrecisionConfig& cfg);
std::string report_to_json(const ConvergenceReport& rep, const PrecisionConfig& cfg);
std::string report_to_csv(const ConvergenceReport& rep, const PrecisionConfig& cfg);

}  // namespace cbop
