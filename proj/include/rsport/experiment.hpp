// Orchestration behind the CLI subcommands: scenario assembly, solving,
// strategy construction from config specs, and artifact emission.  Kept in
// the library so tests can drive the exact code paths the binary runs.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsport/bellman.hpp"
#include "rsport/config.hpp"
#include "rsport/evaluation.hpp"
#include "rsport/io.hpp"
#include "rsport/strategies.hpp"

namespace rsport {

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> fixed_iters;
  std::optional<double> tol;
  std::optional<int> horizon;
};

ExperimentConfig apply_overrides(ExperimentConfig config, const CliOverrides& overrides);

// Finite scenario set for the configured model: exact for discrete laws,
// seeded draws for Gaussian ones.
ScenarioSet build_scenarios(const ExperimentConfig& config);

SolveOptions solve_options(const ExperimentConfig& config, int threads);

// Materializes a strategy spec; Bellman policies are loaded from their CSV.
Strategy build_strategy(const StrategySpec& spec, const ExperimentConfig& config);

nlohmann::json config_to_json(const ExperimentConfig& config);

// Subcommands.  Each writes its artifacts under out_dir and returns a
// process exit code (0 success, 3 non-convergence).
int cmd_solve(const ExperimentConfig& config, const std::string& out_dir, int threads);
int cmd_evaluate(const ExperimentConfig& config, const std::string& out_dir, int threads);
int cmd_simulate(const ExperimentConfig& config, const std::string& out_dir, int horizon,
                 int threads);
int cmd_region(const std::string& policy_path, double eta, double snap_eta,
               const std::string& out_dir);
int cmd_markowitz(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace rsport
