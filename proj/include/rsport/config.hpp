// Experiment configuration: a flat key = value text file (comments with '#')
// describing the return model, costs, solver, and evaluation setup.  Unknown
// keys are rejected; every error names the offending line and field.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsport/costs.hpp"
#include "rsport/geometry.hpp"
#include "rsport/market.hpp"
#include "rsport/types.hpp"

namespace rsport {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StrategySpec {
  enum class Kind { BuyAndHold, FixedMix, FixedMixScan, FixedMixMarkowitz, Bellman, None };
  Kind kind = Kind::None;
  int asset = -1;           // BuyAndHold, 0-based
  Vector target;            // FixedMix
  std::string policy_path;  // Bellman
  std::string label;
};

struct ExperimentConfig {
  ReturnModel model;
  int assets = 0;
  double gamma = 0.0;
  CostSchedule schedule;

  // solver
  double grid_step = 0.0;
  double tol = 1e-6;
  int max_iter = 200;
  int fixed_iters = 0;  // 0 = tolerance stopping
  bool refine = true;
  InterpMode interp = InterpMode::Linear;

  // Gaussian scenario discretization
  int n_scenarios = 4096;
  std::uint64_t scenario_seed = 7;
  bool antithetic = false;

  // evaluation
  int horizon = 250;
  int n_paths = 20000;
  std::uint64_t seed = 1;
  double trade_snap = 1e-3;   // bellman no-trade snap (l1)
  double region_eta = 0.0;    // 0 = half the grid step
  double scan_step = 0.01;    // fixed-mix proportion scan
  Vector initial;             // starting allocation; empty = uniform
  std::vector<StrategySpec> strategies;

  double effective_region_eta() const { return region_eta > 0.0 ? region_eta : 0.5 * grid_step; }
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");

}  // namespace rsport
