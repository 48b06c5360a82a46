#ifndef COVLAP_CONFIG_HPP
#define COVLAP_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "covlap/errors.hpp"

namespace covlap {

/// Scenario description parsed from the flat key-value config format
/// ("key = value" lines, '#' comments, dotted sections).
struct ScenarioConfig {
  // algebra: built-in name ("u1^3", "su2", "su3") or a definition file path
  std::string algebra = "su2";

  double grid_L = 3.0;
  int grid_n = 25;
  double sigma = 1.0;
  std::uint64_t seed = 1;
  int threads = 1;  // COVLAP_THREADS cap (operations are deterministic)

  // potential: generated bumps, a field file, or zero
  std::string potential_kind = "bumps";  // bumps | file | zero
  int potential_bumps = 2;
  double potential_amplitude = 0.4;
  std::string potential_file;
  std::string potential_smoothness;  // declared class for file potentials ("C2")

  // source: generated bumps, a field file, zero, or a manufactured scenario
  std::string source_kind = "bumps";  // bumps | file | zero | manufactured
  int source_bumps = 1;
  double source_amplitude = 1.0;
  std::string source_file;

  std::string z0_file;  // optional asymptotic profile

  double solver_tol = 1e-8;
  int solver_max_iter = 5000;
  bool solver_diag_precond = false;

  std::vector<std::string> checks;

  // family of test mappings shared by the checks
  int family_samples = 30;
  int family_min_bumps = 1;
  int family_max_bumps = 2;
  double family_min_radius = 0.35;
  double family_max_radius = 0.45;
  double family_center_frac = 0.20;
  double family_min_amplitude = 0.5;
  double family_max_amplitude = 2.0;

  // per-check parameters
  int apriori_n = 2;
  int embedding_n = 2;
  int interpolation_n = 2;
  int interpolation_which = 2;
  double interpolation_q = 4.0;
  int mollified_p = 0;
  std::vector<double> mollified_deltas = {0.4, 0.2, 0.1};
  std::vector<double> ginibre_deltas = {1.0, 0.1, 0.01};
  double gurka_sigma = -1.0;  // defaults to sigma; 0 allowed for this diagnostic
  double gurka_p = 2.0;

  std::vector<int> bench_n = {17, 33};
  std::string output_dir = "out";
  bool output_csv = false;

  /// Every key=value pair after defaulting, for provenance in artifacts.
  std::map<std::string, std::string> resolved;
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

/// Invariants shared by all subcommands (sigma range, grid size, files exist,
/// smoothness metadata for file potentials). Throws ConfigError naming the
/// offending field.
void validate_config(const ScenarioConfig& cfg, bool for_solve);

}  // namespace covlap

#endif  // COVLAP_CONFIG_HPP
