// rsport: long-run risk-sensitive portfolio optimization with proportional
// transaction costs.
//
//   rsport solve     --config FILE --out DIR   Bellman value iteration
//   rsport evaluate  --config FILE --out DIR   Monte Carlo strategy metrics
//   rsport simulate  --config FILE --out DIR   single-trajectory wealth paths
//   rsport region    --policy FILE --out DIR   no-trade region extraction
//   rsport markowitz --config FILE --out DIR   mean-variance comparison point
//
// Exit codes: 0 success, 2 config error, 3 non-convergence, 4 I/O error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "rsport/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  rsport::CliOverrides overrides;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
  auto* config = cmd->add_option("--config", args.config_path, "experiment config file");
  if (needs_config) config->required();
  cmd->add_option("--out", args.out_dir, "output directory (default: out)");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&args](std::uint64_t v) { args.overrides.seed = v; },
      "override the evaluation seed");
  cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
  cmd->add_option_function<int>(
      "--fixed-iters", [&args](int v) { args.overrides.fixed_iters = v; },
      "run exactly N value-iteration sweeps");
  cmd->add_option_function<double>(
      "--tol", [&args](double v) { args.overrides.tol = v; },
      "override the span-seminorm stopping tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"risk-sensitive portfolio optimization with transaction costs"};
  app.require_subcommand(1);

  CommonArgs solve_args, eval_args, sim_args, markowitz_args;
  int sim_horizon = 0;
  std::string region_policy, region_out = "out";
  double region_eta = 0.0;
  double region_snap = 1e-3;

  auto* solve = app.add_subcommand("solve", "solve the Bellman equation, emit value/policy");
  add_common(solve, solve_args);

  auto* evaluate = app.add_subcommand("evaluate", "Monte Carlo metrics per strategy");
  add_common(evaluate, eval_args);

  auto* simulate = app.add_subcommand("simulate", "wealth paths on one shared trajectory");
  add_common(simulate, sim_args);
  simulate->add_option("--horizon", sim_horizon, "trajectory length (default: config horizon)");

  auto* region = app.add_subcommand("region", "extract the no-trade region of a policy");
  region->add_option("--policy", region_policy, "policy.csv produced by solve")->required();
  region->add_option("--eta", region_eta, "no-trade membership tolerance (l1)")->required();
  region->add_option("--snap", region_snap, "decision no-trade snap (default 1e-3)");
  region->add_option("--out", region_out, "output directory (default: out)");

  auto* markowitz = app.add_subcommand("markowitz", "simplex-constrained mean-variance point");
  add_common(markowitz, markowitz_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) {
      const auto config = rsport::apply_overrides(
          rsport::load_config(solve_args.config_path), solve_args.overrides);
      return rsport::cmd_solve(config, solve_args.out_dir, solve_args.threads);
    }
    if (evaluate->parsed()) {
      const auto config = rsport::apply_overrides(
          rsport::load_config(eval_args.config_path), eval_args.overrides);
      return rsport::cmd_evaluate(config, eval_args.out_dir, eval_args.threads);
    }
    if (simulate->parsed()) {
      const auto config = rsport::apply_overrides(
          rsport::load_config(sim_args.config_path), sim_args.overrides);
      const bool horizon_given = simulate->count("--horizon") > 0;
      if (horizon_given && sim_horizon < 1) {
        throw rsport::ValidationError("simulate: horizon must be at least 1");
      }
      const int horizon = horizon_given ? sim_horizon : config.horizon;
      return rsport::cmd_simulate(config, sim_args.out_dir, horizon, sim_args.threads);
    }
    if (region->parsed()) {
      return rsport::cmd_region(region_policy, region_eta, region_snap, region_out);
    }
    if (markowitz->parsed()) {
      const auto config = rsport::apply_overrides(
          rsport::load_config(markowitz_args.config_path), markowitz_args.overrides);
      return rsport::cmd_markowitz(config, markowitz_args.out_dir);
    }
  } catch (const rsport::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const rsport::ValidationError& err) {
    std::cerr << "invalid input: " << err.what() << "\n";
    return 2;
  } catch (const rsport::NonConvergenceError& err) {
    std::cerr << "non-convergence: " << err.what() << "\n";
    return 3;
  } catch (const rsport::CsvParseError& err) {
    std::cerr << "parse error: " << err.what() << "\n";
    return 4;
  } catch (const rsport::IoError& err) {
    std::cerr << "I/O error: " << err.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& err) {
    std::cerr << "I/O error: " << err.what() << "\n";
    return 4;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
