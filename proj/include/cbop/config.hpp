#pragma once

#include <map>
#include <optional>
#include <string>

#include "cbop/harness.hpp"

namespace cbop {

// Configuration-file errors carry the offending location.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line, column;
};

// Parsed run configuration. The file format is line oriented:
//   [section]            sections: precision, measure.sigma1, measure.sigma2, run
//   key = value          values to end of line; # starts a comment
// Numbers are decimal strings parsed at full precision; fp_tol accepts the
// form 2^-K as well.
struct RunConfig {
  PrecisionConfig precision;
  std::optional<Measure> sigma1;
  std::optional<Measure> sigma2;
  std::vector<long> n_list;
  std::string suite;
  std::string out_dir = "out";
  // varying denominator family: all 2n zeros at a single point t0
  std::optional<Real> w_point;

  MeasurePair pair() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace cbop
