// Monte Carlo performance metrics, trading-intensity statistics, and
// no-trade region extraction.  Every figure reported here is time-normalized:
// statistics of ln W(T) divided by the horizon T.  Entropy is estimated by a
// log-sum-exp over path values; its standard error comes from a bootstrap
// because the entropic functional has no simple closed form.

#pragma once

#include <cstdint>
#include <vector>

#include "rsport/bellman.hpp"
#include "rsport/market.hpp"
#include "rsport/strategies.hpp"
#include "rsport/types.hpp"

namespace rsport {

struct Metrics {
  double mean = 0.0;     // E[ln W_T] / T
  double std = 0.0;      // Std[ln W_T] / T
  double entropy = 0.0;  // u_gamma(ln W_T) / T
  double taylor = 0.0;   // (E[ln W_T] + (gamma/2) Var[ln W_T]) / T
  int n_paths = 0;
  int horizon = 0;
  double stderr_mean = 0.0;
  double stderr_entropy = 0.0;  // bootstrap, 200 resamples
};

struct TradeStats {
  int days_traded = 0;
  double fraction_traded = 0.0;
  double cumulative_decay = 1.0;  // product of s over the path
};

struct NoTradeRegion {
  std::vector<Eigen::Index> members;  // grid ordinals with decide(pi) == pi within eta
  Matrix boundary;                    // 2 x d: coordinate-wise min/max over members
};

struct McOptions {
  int threads = 1;
  int bootstrap_resamples = 200;
};

// Simulates n_paths wealth paths (path k is a pure function of (seed, k)) and
// reduces ln W(T) into time-normalized metrics with a fixed pairwise
// reduction order, so results are bit-identical for any worker count.
Metrics evaluate_mc(const Strategy& strategy, const ReturnModel& model,
                    const CostSchedule& schedule, int horizon, int n_paths,
                    std::uint64_t seed, double gamma, const McOptions& options = {});

TradeStats trading_stats(const WealthPath& path);

// Grid points the policy maps to themselves within eta (l1 distance).
NoTradeRegion no_trade_region(const Policy& policy, double eta, double snap_eta = 1e-3);

// Exact trajectory statistics of a fixed-mix strategy under a discrete model:
// after the initial rebalance the state is always the target, so each period
// contributes one of finitely many log increments.  Used to pick the
// best-performing proportion over the evaluation path set.
Vector select_scan_fixed_mix_target(const DiscreteReturnModel& model,
                                    const CostSchedule& schedule, int horizon, int n_paths,
                                    std::uint64_t seed, const Vector& initial,
                                    double scan_step = 0.01);

}  // namespace rsport
