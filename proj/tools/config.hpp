#pragma once

#include "pdpml/diagnostics.hpp"
#include "pdpml/verify.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdpml::cli {

/// Everything a subcommand needs, with defaults materialised.
struct CliConfig {
  SimulationConfig sim;
  int enlargement = 4;

  std::vector<double> scan_sigma0_h{0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<std::array<double, 2>> scan_kappa{{5.0, 10.0}, {5.0, 20.0}, {5.0, 40.0}};
  bool scan_measure = true;

  std::vector<double> conv_meshes{0.125, 0.0625, 0.03125};
  double conv_h_ref = 0.015625;
  double conv_t_eval = 1.5;
  int conv_enlargement = 3;

  VerifySettings verify;
  long bench_steps = 200;

  bool operator==(const CliConfig&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& key, const std::string& what);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

/// Sectioned key = value text; '#' or ';' start a comment line. Throws
/// ConfigError naming the key and line for unknown keys, bad values, missing
/// required keys and invariant violations.
CliConfig parse_config(std::istream& in, const std::string& source = "config");
CliConfig parse_config_file(const std::string& path);

/// Every resolved key, in the same format; parsing it gives the same config.
std::string serialize_config(const CliConfig& c);

}  // namespace pdpml::cli
