#include "rsport/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace rsport {

Metrics evaluate_mc(const Strategy& strategy, const ReturnModel& model,
                    const CostSchedule& schedule, int horizon, int n_paths,
                    std::uint64_t seed, double gamma, const McOptions& options) {
  require(horizon >= 1, "evaluate_mc: horizon must be at least 1");
  require(n_paths >= 2, "evaluate_mc: need at least 2 paths");
  validate_model(model);
  validate_schedule(schedule);

  std::vector<double> terminal(n_paths);
  const int threads = resolve_threads(options.threads);
  parallel_for(static_cast<std::size_t>(n_paths), threads, [&](std::size_t k) {
    const Matrix path = sample_path(model, horizon, seed, k);
    const WealthPath wealth = simulate_wealth(strategy, path, schedule, 1.0);
    terminal[k] = wealth.log_wealth.back();
  });

  Metrics metrics;
  metrics.n_paths = n_paths;
  metrics.horizon = horizon;

  const double inv_t = 1.0 / horizon;
  const double mean_u = pairwise_sum(terminal) / n_paths;
  std::vector<double> sq(n_paths);
  for (int k = 0; k < n_paths; ++k) sq[k] = (terminal[k] - mean_u) * (terminal[k] - mean_u);
  const double var_u = pairwise_sum(sq) / (n_paths - 1);
  const double std_u = std::sqrt(var_u);

  metrics.mean = mean_u * inv_t;
  metrics.std = std_u * inv_t;
  metrics.taylor = taylor_proxy(mean_u, var_u, gamma) * inv_t;
  metrics.stderr_mean = std_u / std::sqrt(double(n_paths)) * inv_t;

  if (gamma == 0.0) {
    metrics.entropy = metrics.mean;
    metrics.stderr_entropy = metrics.stderr_mean;
    return metrics;
  }

  // entropy: (1/gamma) ln mean(exp(gamma lnW_T)), max-shifted once; the
  // shifted exponentials are reused by every bootstrap resample
  double shift = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_paths; ++k) shift = std::max(shift, gamma * terminal[k]);
  std::vector<double> shifted(n_paths);
  for (int k = 0; k < n_paths; ++k) shifted[k] = std::exp(gamma * terminal[k] - shift);
  const auto entropy_of_mean = [&](double mean_exp) {
    return (shift + std::log(mean_exp)) / gamma * inv_t;
  };
  metrics.entropy = entropy_of_mean(pairwise_sum(shifted) / n_paths);

  const int resamples = std::max(2, options.bootstrap_resamples);
  std::vector<double> boot(resamples);
  std::vector<double> draw(n_paths);
  for (int b = 0; b < resamples; ++b) {
    SplitMix64 rng = make_stream(seed ^ 0xB00757A9B00757A9ULL, b);
    for (int k = 0; k < n_paths; ++k) {
      draw[k] = shifted[rng.next_u64() % n_paths];
    }
    boot[b] = entropy_of_mean(pairwise_sum(draw) / n_paths);
  }
  const double boot_mean = pairwise_sum(boot) / resamples;
  double acc = 0.0;
  for (double value : boot) acc += (value - boot_mean) * (value - boot_mean);
  metrics.stderr_entropy = std::sqrt(acc / (resamples - 1));
  return metrics;
}

TradeStats trading_stats(const WealthPath& path) {
  TradeStats stats;
  for (std::size_t t = 0; t < path.traded.size(); ++t) {
    if (path.traded[t]) ++stats.days_traded;
    stats.cumulative_decay *= path.decays[t];
  }
  stats.fraction_traded =
      path.traded.empty() ? 0.0 : double(stats.days_traded) / double(path.traded.size());
  return stats;
}

NoTradeRegion no_trade_region(const Policy& policy, double eta, double snap_eta) {
  require(eta > 0.0, "no_trade_region: eta must be positive");
  validate(policy);
  const auto& grid = *policy.grid;
  Strategy strategy = Strategy::bellman(policy, snap_eta, "region-probe");

  NoTradeRegion region;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Vector point = grid.point(i);
    const Vector target = decide(strategy, point);
    if ((target - point).cwiseAbs().sum() <= eta) region.members.push_back(i);
  }
  if (region.members.empty()) return region;

  region.boundary.resize(2, grid.dimension());
  region.boundary.row(0).setConstant(std::numeric_limits<double>::infinity());
  region.boundary.row(1).setConstant(-std::numeric_limits<double>::infinity());
  for (const Eigen::Index i : region.members) {
    for (int j = 0; j < grid.dimension(); ++j) {
      region.boundary(0, j) = std::min(region.boundary(0, j), grid.points()(i, j));
      region.boundary(1, j) = std::max(region.boundary(1, j), grid.points()(i, j));
    }
  }
  return region;
}

Vector select_scan_fixed_mix_target(const DiscreteReturnModel& model,
                                    const CostSchedule& schedule, int horizon, int n_paths,
                                    std::uint64_t seed, const Vector& initial,
                                    double scan_step) {
  validate_model(model);
  validate_schedule(schedule);
  require(horizon >= 1 && n_paths >= 1, "fixed-mix scan: empty evaluation set");
  check_simplex(initial);
  const int d = static_cast<int>(model.log_returns.cols());
  const auto n_outcomes = model.log_returns.rows();

  // Outcome counts per path: n_o over periods 1..T-1 (each followed by a
  // rebalance) and the final period separately (no trade afterwards).
  Matrix counts = Matrix::Zero(n_paths, n_outcomes);
  Eigen::VectorXi last(n_paths);
  const Matrix gross = model.log_returns.array().exp();
  for (int k = 0; k < n_paths; ++k) {
    const Matrix path = sample_path(model, horizon, seed, k);
    for (int t = 0; t < horizon; ++t) {
      Eigen::Index outcome = 0;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index o = 0; o < n_outcomes; ++o) {
        const double dist = (path.row(t) - gross.row(o)).cwiseAbs().sum();
        if (dist < best) {
          best = dist;
          outcome = o;
        }
      }
      if (t + 1 < horizon) {
        counts(k, outcome) += 1.0;
      } else {
        last[k] = static_cast<int>(outcome);
      }
    }
  }

  const GridPtr scan = build_grid(d, scan_step);
  Vector best_target;
  double best_mean = -std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < scan->size(); ++c) {
    const Vector target = scan->point(c);
    const double initial_cost = std::log(decay_factor(initial, target, schedule));
    // per-outcome log increment: growth plus the rebalance back to target
    Vector with_trade(n_outcomes);
    Vector growth_only(n_outcomes);
    for (Eigen::Index o = 0; o < n_outcomes; ++o) {
      const Vector w = gross.row(o).transpose();
      growth_only[o] = std::log(w.dot(target));
      with_trade[o] =
          growth_only[o] + std::log(decay_factor(drift(target, w), target, schedule));
    }
    double total = 0.0;
    for (int k = 0; k < n_paths; ++k) {
      total += counts.row(k).dot(with_trade) + growth_only[last[k]];
    }
    const double mean_log_wealth = initial_cost + total / n_paths;
    if (mean_log_wealth > best_mean) {
      best_mean = mean_log_wealth;
      best_target = target;
    }
  }
  return best_target;
}

}  // namespace rsport
