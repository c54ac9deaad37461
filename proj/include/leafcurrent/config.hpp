#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leafcurrent/epsilon_profiles.hpp"
#include "leafcurrent/geometry.hpp"
#include "leafcurrent/quadrature.hpp"

namespace leafcurrent {

/// Everything a CLI run depends on. Serialized verbatim into the manifest as
/// INI text; to_config_text and parse_config_text round-trip exactly.
struct RunConfig {
  // [geometry]
  double a = 1.0;
  double b = 1.0;
  // [epsilon_profiles]
  std::string profile = "power:0.5";
  double A = 10.0;
  // [harmonic_extension]
  QuadratureSpec quad;
  // [current_mass]
  std::vector<double> deltas{0.5, 0.3, 0.1, 0.05, 0.02};
  // [ddc_verifier]
  std::vector<double> s_values{5.0, 10.0, 20.0, 40.0, 80.0};
  double lambda = 1.0;
  // [cli_reports]
  std::string out = "leafcurrent_out";
  int threads = 1;
  std::uint64_t seed = 20240917;
  int leaf_grid = 200;
  int extend_grid = 100;

  /// Throws std::invalid_argument naming the offending key.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Geometry for the configured (a, b). For b < 0 the coordinates are
/// exchanged, eta -> 1/eta, and a line describing the swap is written to
/// `log` (if given).
Hyperbolicity config_hyperbolicity(const RunConfig& c, std::string* log = nullptr);

EpsilonProfile config_profile(const RunConfig& c);

std::string to_config_text(const RunConfig& c);

/// Sections and keys as written by to_config_text; '#' and ';' start
/// comments. Missing keys keep their defaults, unknown keys are errors.
RunConfig parse_config_text(const std::string& text);

RunConfig load_config(const std::string& path);

/// Lists like "0.5, 0.3, 0.1".
std::vector<double> parse_number_list(const std::string& text);

/// Shortest text that reads back to the same double.
std::string format_double(double x);

}  // namespace leafcurrent
