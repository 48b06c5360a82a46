#ifndef COVLAP_RUNNER_HPP
#define COVLAP_RUNNER_HPP

#include "covlap/checks.hpp"
#include "covlap/config.hpp"
#include "covlap/solver.hpp"

namespace covlap {

/// Build the configured algebra / grid / fields.
AlgebraPtr make_algebra(const ScenarioConfig& cfg);
VectorField make_potential(const ScenarioConfig& cfg, const Grid3& grid,
                           const AlgebraPtr& alg);
ScalarField make_source(const ScenarioConfig& cfg, const Grid3& grid,
                        const AlgebraPtr& alg);
TestFamily make_family(const ScenarioConfig& cfg, const Grid3& grid,
                       const AlgebraPtr& alg);

/// Run one named inequality check against the configured scenario.
CheckReport run_named_check(const std::string& name, const ScenarioConfig& cfg,
                            const VectorField& A, const TestFamily& family);

/// Subcommand bodies. Each writes its artifacts under cfg.output_dir and
/// returns the process exit code (0 ok, 3 solver non-convergence). Config
/// problems throw ConfigError, which the CLI maps to exit code 2.
int run_solve(const ScenarioConfig& cfg);
int run_verify(const ScenarioConfig& cfg);
int run_bench(const ScenarioConfig& cfg);

}  // namespace covlap

#endif  // COVLAP_RUNNER_HPP
