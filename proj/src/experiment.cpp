#include "rsport/experiment.hpp"

#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>

#include "rsport/markowitz.hpp"

namespace rsport {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir + ": cannot create output directory: " + ec.message());
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw IoError(path + ": write failed");
}

std::string sanitize(const std::string& label) {
  std::string out = label;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
  }
  return out;
}

// bellman strategies are labeled by where their policy came from
std::string bellman_label(const std::string& policy_path) {
  const fs::path p(policy_path);
  if (p.filename() == "policy.csv" && p.has_parent_path()) {
    return "bellman-" + p.parent_path().filename().string();
  }
  return "bellman-" + p.stem().string();
}

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

ExperimentConfig apply_overrides(ExperimentConfig config, const CliOverrides& overrides) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.fixed_iters) config.fixed_iters = *overrides.fixed_iters;
  if (overrides.tol) config.tol = *overrides.tol;
  if (overrides.horizon) config.horizon = *overrides.horizon;
  return config;
}

ScenarioSet build_scenarios(const ExperimentConfig& config) {
  if (const auto* discrete = std::get_if<DiscreteReturnModel>(&config.model)) {
    return scenarios_from_discrete(*discrete);
  }
  const auto& gauss = std::get<GaussianReturnModel>(config.model);
  return scenarios_from_gaussian(gauss, config.n_scenarios, config.scenario_seed,
                                 config.antithetic);
}

SolveOptions solve_options(const ExperimentConfig& config, int threads) {
  SolveOptions options;
  options.tol = config.tol;
  options.max_iter = config.max_iter;
  options.fixed_iters = config.fixed_iters;
  options.search.refine = config.refine;
  options.search.interp = config.interp;
  options.search.threads = threads;
  return options;
}

Strategy build_strategy(const StrategySpec& spec, const ExperimentConfig& config) {
  const int d = config.assets;
  Strategy strategy;
  switch (spec.kind) {
    case StrategySpec::Kind::BuyAndHold:
      return Strategy::buy_and_hold(spec.asset, d);
    case StrategySpec::Kind::FixedMix:
      strategy = Strategy::fixed_mix(snap_to_simplex(spec.target), spec.label);
      break;
    case StrategySpec::Kind::FixedMixScan: {
      const auto* discrete = std::get_if<DiscreteReturnModel>(&config.model);
      if (discrete == nullptr) {
        throw ConfigError("field 'strategy': fixed_mix_scan needs a discrete model");
      }
      const Vector start = config.initial.size() > 0
                               ? config.initial
                               : Vector::Constant(d, 1.0 / d);
      const Vector target =
          select_scan_fixed_mix_target(*discrete, config.schedule, config.horizon,
                                       config.n_paths, config.seed, start, config.scan_step);
      strategy = Strategy::fixed_mix(target, spec.label);
      break;
    }
    case StrategySpec::Kind::FixedMixMarkowitz: {
      if (config.gamma >= 0.0) {
        throw ConfigError("field 'strategy': fixed_mix_markowitz needs gamma < 0");
      }
      const auto [mean, cov] = model_moments(config.model);
      strategy = Strategy::fixed_mix(solve_mean_variance(mean, cov, config.gamma), spec.label);
      break;
    }
    case StrategySpec::Kind::Bellman: {
      Policy policy = read_policy_csv(spec.policy_path);
      if (policy.grid->dimension() != d) {
        throw ConfigError("field 'strategy': policy '" + spec.policy_path + "' has " +
                          std::to_string(policy.grid->dimension()) + " assets, config has " +
                          std::to_string(d));
      }
      strategy = Strategy::bellman(std::move(policy), config.trade_snap,
                                   bellman_label(spec.policy_path));
      break;
    }
    case StrategySpec::Kind::None:
      strategy = Strategy::none(config.initial.size() > 0 ? config.initial
                                                          : Vector::Constant(d, 1.0 / d));
      break;
  }
  if (config.initial.size() > 0) strategy.initial = config.initial;
  return strategy;
}

json config_to_json(const ExperimentConfig& config) {
  json model;
  if (const auto* discrete = std::get_if<DiscreteReturnModel>(&config.model)) {
    model["kind"] = "discrete";
    json outcomes = json::array();
    for (Eigen::Index o = 0; o < discrete->probs.size(); ++o) {
      json outcome;
      outcome["prob"] = discrete->probs[o];
      outcome["log_return"] = to_std(discrete->log_returns.row(o).transpose());
      outcomes.push_back(outcome);
    }
    model["outcomes"] = outcomes;
  } else {
    const auto& gauss = std::get<GaussianReturnModel>(config.model);
    model["kind"] = "gaussian";
    model["mean"] = to_std(gauss.mean);
    json cov = json::array();
    for (Eigen::Index i = 0; i < gauss.cov.rows(); ++i) {
      cov.push_back(to_std(gauss.cov.row(i).transpose()));
    }
    model["cov"] = cov;
  }

  json doc;
  doc["model"] = model;
  doc["assets"] = config.assets;
  doc["gamma"] = config.gamma;
  doc["buy_cost"] = to_std(config.schedule.buy);
  doc["sell_cost"] = to_std(config.schedule.sell);
  doc["grid_step"] = config.grid_step;
  doc["tol"] = config.tol;
  doc["max_iter"] = config.max_iter;
  doc["fixed_iters"] = config.fixed_iters;
  doc["refine"] = config.refine;
  doc["interpolation"] = config.interp == InterpMode::Linear ? "linear" : "nearest";
  doc["n_scenarios"] = config.n_scenarios;
  doc["scenario_seed"] = config.scenario_seed;
  doc["antithetic"] = config.antithetic;
  doc["horizon"] = config.horizon;
  doc["n_paths"] = config.n_paths;
  doc["seed"] = config.seed;
  doc["trade_snap"] = config.trade_snap;
  doc["region_eta"] = config.effective_region_eta();
  doc["scan_step"] = config.scan_step;
  if (config.initial.size() > 0) {
    doc["initial_weights"] = to_std(config.initial);
  } else {
    doc["initial_weights"] = "uniform";
  }
  json strategies = json::array();
  for (const auto& spec : config.strategies) {
    switch (spec.kind) {
      case StrategySpec::Kind::BuyAndHold:
        strategies.push_back("buy_and_hold " + std::to_string(spec.asset + 1));
        break;
      case StrategySpec::Kind::FixedMix: {
        std::string line = "fixed_mix";
        for (Eigen::Index j = 0; j < spec.target.size(); ++j) {
          line += " " + format_double(spec.target[j]);
        }
        strategies.push_back(line);
        break;
      }
      case StrategySpec::Kind::FixedMixScan:
        strategies.push_back("fixed_mix_scan");
        break;
      case StrategySpec::Kind::FixedMixMarkowitz:
        strategies.push_back("fixed_mix_markowitz");
        break;
      case StrategySpec::Kind::Bellman:
        strategies.push_back("bellman " + spec.policy_path);
        break;
      case StrategySpec::Kind::None:
        strategies.push_back("none");
        break;
    }
  }
  doc["strategies"] = strategies;
  return doc;
}

int cmd_solve(const ExperimentConfig& config, const std::string& out_dir, int threads) {
  ensure_dir(out_dir);
  const auto started = std::chrono::steady_clock::now();
  const ScenarioSet scenarios = build_scenarios(config);
  const GridPtr grid = build_grid(config.assets, config.grid_step);
  const SolveOptions options = solve_options(config, threads);
  const ZBounds bounds =
      config.gamma != 0.0 ? z_bounds(scenarios, config.gamma, config.schedule) : ZBounds{};

  SolveReport report;
  int exit_code = 0;
  try {
    report = solve_ergodic(scenarios, config.gamma, config.schedule, grid, options);
  } catch (const NonConvergenceError& err) {
    report = err.report();
    exit_code = 3;
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  json doc;
  doc["config"] = config_to_json(config);
  json result;
  result["converged"] = report.converged;
  result["iterations"] = report.iterations;
  result["lambda_hat"] = report.lambda_hat;
  result["lambda_halfwidth"] = report.lambda_halfwidth;
  result["residual_span"] = report.residual_span;
  result["span_history"] = report.span_history;
  result["grid_points"] = grid->size();
  result["scenario_count"] = scenarios.gross.rows();
  if (config.gamma != 0.0) {
    result["z_minus"] = bounds.z_minus;
    result["z_plus"] = bounds.z_plus;
  }
  result["elapsed_seconds"] = elapsed;
  doc["result"] = result;
  write_json(out_dir + "/report.json", doc);

  if (report.value.grid != nullptr) {
    write_value_csv(out_dir + "/value.csv", report.value);
  }
  if (report.policy.grid != nullptr) {
    write_policy_csv(out_dir + "/policy.csv", report.policy);
  }
  return exit_code;
}

int cmd_evaluate(const ExperimentConfig& config, const std::string& out_dir, int threads) {
  if (config.strategies.empty()) {
    throw ConfigError("field 'strategy': evaluate needs at least one strategy");
  }
  ensure_dir(out_dir);
  McOptions mc;
  mc.threads = threads;
  std::vector<MetricsRow> rows;
  for (const auto& spec : config.strategies) {
    const Strategy strategy = build_strategy(spec, config);
    const Metrics metrics =
        evaluate_mc(strategy, config.model, config.schedule, config.horizon, config.n_paths,
                    config.seed, config.gamma, mc);
    rows.push_back({strategy.label, metrics});
  }
  write_metrics_csv(out_dir + "/metrics.csv", rows);
  write_metrics_text(out_dir + "/metrics.txt", rows);
  return 0;
}

int cmd_simulate(const ExperimentConfig& config, const std::string& out_dir, int horizon,
                 int threads) {
  (void)threads;  // single trajectory: nothing to parallelize
  if (config.strategies.empty()) {
    throw ConfigError("field 'strategy': simulate needs at least one strategy");
  }
  require(horizon >= 1, "simulate: horizon must be at least 1");
  ensure_dir(out_dir);
  // one shared return path so strategies are compared on identical draws
  const Matrix path = sample_path(config.model, horizon, config.seed, 0);
  for (const auto& spec : config.strategies) {
    const Strategy strategy = build_strategy(spec, config);
    const WealthPath wealth = simulate_wealth(strategy, path, config.schedule, 1.0);
    write_wealth_csv(out_dir + "/path_" + sanitize(strategy.label) + ".csv", wealth, path);
  }
  return 0;
}

int cmd_region(const std::string& policy_path, double eta, double snap_eta,
               const std::string& out_dir) {
  require(eta > 0.0, "region: eta must be positive");
  ensure_dir(out_dir);
  const Policy policy = read_policy_csv(policy_path);
  const NoTradeRegion region = no_trade_region(policy, eta, snap_eta);

  json doc;
  doc["policy"] = policy_path;
  doc["eta"] = eta;
  doc["n_members"] = region.members.size();
  doc["grid_points"] = policy.grid->size();
  if (!region.members.empty()) {
    doc["boundary_min"] = to_std(region.boundary.row(0).transpose());
    doc["boundary_max"] = to_std(region.boundary.row(1).transpose());
    json members = json::array();
    for (const Eigen::Index i : region.members) {
      members.push_back(to_std(policy.grid->point(i)));
    }
    doc["members"] = members;
  }
  write_json(out_dir + "/region.json", doc);
  return 0;
}

int cmd_markowitz(const ExperimentConfig& config, const std::string& out_dir) {
  ensure_dir(out_dir);
  const auto [mean, cov] = model_moments(config.model);
  const Vector weights = solve_mean_variance(mean, cov, config.gamma);

  json doc;
  doc["gamma"] = config.gamma;
  doc["weights"] = to_std(weights);
  doc["objective"] = mean_variance_objective(weights, mean, cov, config.gamma);
  write_json(out_dir + "/markowitz.json", doc);
  return 0;
}

}  // namespace rsport
