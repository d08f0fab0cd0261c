// Trading strategies and the cost-aware wealth recursion
//
//   ln W(t+1-) = ln W(t-) + ln s(pi(t-), pi(t)) + ln <pi(t), w(t+1)>,
//
// where pi(t-) = G(pi(t-1), w(t)) are the drifted pre-trade weights and
// pi(t) the strategy's rebalancing decision.  A direct volume-space
// implementation of the self-financing condition is included as a reference
// oracle for the weight-space simulator.

#pragma once

#include <string>
#include <vector>

#include "rsport/costs.hpp"
#include "rsport/geometry.hpp"
#include "rsport/types.hpp"

namespace rsport {

struct Strategy {
  enum class Kind { BuyAndHold, FixedMix, Bellman, None };

  Kind kind = Kind::None;
  int asset = -1;        // BuyAndHold
  Vector target;         // FixedMix
  Policy policy;         // Bellman
  Vector initial;        // starting allocation for FixedMix/Bellman/None
  double snap_eta = 1e-3;  // Bellman no-trade snap in l1 weight distance
  std::string label;

  static Strategy buy_and_hold(int asset, int dimension);
  static Strategy fixed_mix(Vector target, std::string label = "fixed-mix");
  static Strategy bellman(Policy policy, double snap_eta = 1e-3,
                          std::string label = "bellman");
  static Strategy none(Vector initial, std::string label = "hold");
};

// Initial post-trade-free allocation of the strategy (unit vector for
// buy-and-hold, configured start otherwise; uniform if unset).
Vector initial_weights(const Strategy& strategy, int dimension);

// Rebalancing decision given pre-trade weights.  Buy-and-hold and `none`
// never trade; fixed-mix always returns its target; the Bellman strategy
// interpolates the policy target and snaps to `pre` when the prescribed
// adjustment is below snap_eta (interpolation jitter would otherwise
// register as a paid micro-trade).
Vector decide(const Strategy& strategy, const Vector& pre);

struct WealthPath {
  std::vector<double> log_wealth;  // ln W(t-) for t = 0..T, starting at ln W(0)
  Matrix pre_weights;              // T x d
  Matrix post_weights;             // T x d
  std::vector<double> decays;      // s(pre(t), post(t)), 1 when no trade
  std::vector<char> traded;        // post != pre beyond 1e-12 in l1
  Vector final_weights;            // drifted weights after the last period
};

// Applies drift, decision, decay, and return accrual per period over the
// given gross-return path (row t = returns of period t+1).
WealthPath simulate_wealth(const Strategy& strategy, const Matrix& gross_path,
                           const CostSchedule& schedule, double w0 = 1.0);

struct VolumeStep {
  Vector volumes;
  double wealth;
};

// Volume-space reference: solves the self-financing condition
// W = W_pre - d(N_new .* S - N_prev .* S) with N_new = W * target / S for the
// post-trade wealth by scalar bisection.  Used to cross-check decay_factor.
VolumeStep volume_oracle_step(const Vector& volumes_prev, const Vector& prices,
                              const Vector& target, const CostSchedule& schedule);

}  // namespace rsport
