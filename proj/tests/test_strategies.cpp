// Strategy decisions and the wealth simulator, cross-checked end to end
// against the volume-space implementation of the self-financing condition.

#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "rsport/bellman.hpp"
#include "rsport/entropic.hpp"
#include "rsport/evaluation.hpp"
#include "rsport/strategies.hpp"

using namespace rsport;
using namespace rsport::fixtures;

namespace {

Vector pair(double first) {
  Vector w(2);
  w << first, 1.0 - first;
  return w;
}

SolveReport toy_solve() {
  const ScenarioSet scenarios = scenarios_from_discrete(toy_model());
  const auto grid = build_grid(2, 0.005);
  SolveOptions options;
  options.fixed_iters = 8;
  return solve_ergodic(scenarios, -0.5, toy_costs(), grid, options);
}

}  // namespace

TEST_CASE("decision rules") {
  SplitMix64 rng = make_stream(91, 0);
  const Strategy hold = Strategy::buy_and_hold(0, 2);
  const Strategy mix = Strategy::fixed_mix(pair(0.3));
  const Strategy still = Strategy::none(pair(0.6));
  for (int it = 0; it < 100; ++it) {
    const Vector pre = random_weights(rng, 2);
    REQUIRE((decide(hold, pre) - pre).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((decide(mix, pre) - pair(0.3)).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((decide(still, pre) - pre).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(Strategy::buy_and_hold(3, 2), ValidationError);

  // `none` holds its initial allocation and never pays costs
  const Matrix path = sample_path(ReturnModel(toy_model()), 30, 8, 0);
  const WealthPath wealth = simulate_wealth(still, path, toy_costs());
  for (int t = 0; t < 30; ++t) REQUIRE(wealth.traded[t] == 0);
  CHECK((wealth.pre_weights.row(0).transpose() - pair(0.6)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bellman decision: no-trade interval and barrier push") {
  const SolveReport report = toy_solve();
  const Strategy strategy = Strategy::bellman(report.policy);

  // pre = 0.5 sits inside the no-trade interval (ca. [0.38, 0.75])
  const Vector inside = pair(0.5);
  CHECK((decide(strategy, inside) - inside).cwiseAbs().maxCoeff() == 0.0);

  // pre = 0.9 is pushed back to roughly the upper barrier
  const Vector outside = pair(0.9);
  const Vector target = decide(strategy, outside);
  CHECK(target[0] < 0.8);
  CHECK(std::abs(target[0] - 0.75) <= 0.05);

  // pre = 0.1 is pushed up to roughly the lower barrier
  const Vector low = pair(0.1);
  const Vector up = decide(strategy, low);
  CHECK(std::abs(up[0] - 0.38) <= 0.05);
}

TEST_CASE("buy-and-hold wealth telescopes to the asset's log-return sum") {
  const ReturnModel model = toy_model();
  const Matrix path = sample_path(model, 200, 5, 0);
  const CostSchedule schedule = toy_costs();
  for (int asset = 0; asset < 2; ++asset) {
    const WealthPath wealth = simulate_wealth(Strategy::buy_and_hold(asset, 2), path, schedule);
    double expected = 0.0;
    for (int t = 0; t < 200; ++t) {
      expected += std::log(path(t, asset));
      REQUIRE(wealth.decays[t] == 1.0);
      REQUIRE(wealth.traded[t] == 0);
    }
    REQUIRE(wealth.log_wealth.back() == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("fixed-mix on a unit path never pays costs") {
  // gross returns identically 1: drifted weights equal the target forever
  Matrix path = Matrix::Ones(50, 2);
  const Strategy mix = Strategy::fixed_mix(pair(0.5));
  const WealthPath wealth = simulate_wealth(mix, path, toy_costs());
  for (int t = 0; t < 50; ++t) {
    REQUIRE(wealth.decays[t] == 1.0);
    REQUIRE(wealth.traded[t] == 0);
  }
  CHECK(wealth.log_wealth.back() == doctest::Approx(0.0));
}

TEST_CASE("one step agrees with the volume-space oracle") {
  SplitMix64 rng = make_stream(97, 0);
  const CostSchedule schedule = toy_costs();
  for (int it = 0; it < 1000; ++it) {
    const Vector pre = random_weights(rng, 2);
    const Vector target = random_weights(rng, 2);
    Vector gross(2);
    gross << 0.5 + rng.next_double(), 0.5 + rng.next_double();

    // weight-space step
    const double decay = decay_factor(pre, target, schedule);
    const double log_growth = std::log(decay) + std::log(gross.dot(target));

    // volume-space step: wealth 1 held at weights pre, prices at 1
    const Vector prices = Vector::Ones(2);
    const VolumeStep traded = volume_oracle_step(pre, prices, target, schedule);
    const double wealth_next = traded.volumes.dot(gross);  // prices move to `gross`
    REQUIRE(std::log(wealth_next) == doctest::Approx(log_growth).epsilon(1e-9));
  }
}

TEST_CASE("volume oracle examples") {
  const CostSchedule schedule = toy_costs();
  Vector volumes(2), prices(2);
  volumes << 0.4, 0.6;
  prices << 1.0, 1.0;

  // target equal to current weights: nothing moves
  Vector target(2);
  target << 0.4, 0.6;
  const VolumeStep same = volume_oracle_step(volumes, prices, target, schedule);
  CHECK(same.wealth == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((same.volumes - volumes).cwiseAbs().maxCoeff() <= 1e-12);

  // full switch at unit prices and unit wealth: wealth 2/3
  volumes << 1.0, 0.0;
  target << 0.0, 1.0;
  const VolumeStep flipped = volume_oracle_step(volumes, prices, target, schedule);
  CHECK(flipped.wealth == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("weight-space and volume-space simulators agree on 50-step paths") {
  SplitMix64 rng = make_stream(101, 0);
  const ReturnModel model = toy_model();
  const CostSchedule schedule = toy_costs();
  const SolveReport report = toy_solve();

  std::vector<Strategy> strategies;
  strategies.push_back(Strategy::buy_and_hold(0, 2));
  strategies.push_back(Strategy::fixed_mix(pair(0.41)));
  strategies.push_back(Strategy::bellman(report.policy));

  for (int it = 0; it < 40; ++it) {
    const Matrix path = sample_path(model, 50, 303, it);
    for (const Strategy& strategy : strategies) {
      const WealthPath wealth = simulate_wealth(strategy, path, schedule);

      // replay in volume space, driving decisions from the weight-space run
      Vector prices = Vector::Ones(2);
      Vector volumes = initial_weights(strategy, 2);  // wealth 1 at unit prices
      double wealth_now = 1.0;
      for (int t = 0; t < 50; ++t) {
        const Vector target = wealth.post_weights.row(t).transpose();
        if (wealth.traded[t]) {
          const VolumeStep traded = volume_oracle_step(volumes, prices, target, schedule);
          volumes = traded.volumes;
        }
        prices = prices.cwiseProduct(path.row(t).transpose());
        wealth_now = volumes.dot(prices);
      }
      REQUIRE(std::log(wealth_now) ==
              doctest::Approx(wealth.log_wealth.back()).epsilon(1e-8));
    }
  }
}

TEST_CASE("wealth stays positive and decays stay bracketed") {
  SplitMix64 rng = make_stream(103, 0);
  const ReturnModel model = toy_model();
  const CostSchedule schedule = toy_costs();
  const double s_tilde = decay_lower_bound(schedule);
  for (int it = 0; it < 50; ++it) {
    const Matrix path = sample_path(model, 100, 17, it);
    const Vector target = random_weights(rng, 2);
    const WealthPath wealth = simulate_wealth(Strategy::fixed_mix(target), path, schedule);
    for (double lw : wealth.log_wealth) REQUIRE(std::isfinite(lw));
    for (int t = 0; t < 100; ++t) {
      REQUIRE(wealth.decays[t] >= s_tilde);
      REQUIRE(wealth.decays[t] <= 1.0);
      if (!wealth.traded[t]) REQUIRE(wealth.decays[t] == 1.0);
    }
    // recursion identity: log-wealth increments decompose exactly
    for (int t = 0; t < 100; ++t) {
      const double increment = std::log(wealth.post_weights.row(t).dot(path.row(t))) +
                               std::log(wealth.decays[t]);
      REQUIRE(wealth.log_wealth[t + 1] - wealth.log_wealth[t] ==
              doctest::Approx(increment).epsilon(1e-10));
    }
  }
}

TEST_CASE("bellman strategy dominates buy-and-hold in sample entropy") {
  const ReturnModel model = toy_model();
  const CostSchedule schedule = toy_costs();
  const SolveReport report = toy_solve();
  const int n_paths = 500;
  const int horizon = 250;

  const auto entropy_of = [&](const Strategy& strategy) {
    Vector terminal(n_paths);
    for (int k = 0; k < n_paths; ++k) {
      const Matrix path = sample_path(model, horizon, 404, k);
      terminal[k] = simulate_wealth(strategy, path, schedule).log_wealth.back();
    }
    return entropic_utility(terminal, Vector::Constant(n_paths, 1.0 / n_paths), -0.5) /
           horizon;
  };

  const double bellman_entropy = entropy_of(Strategy::bellman(report.policy));
  CHECK(bellman_entropy >= entropy_of(Strategy::buy_and_hold(0, 2)));
  CHECK(bellman_entropy >= entropy_of(Strategy::buy_and_hold(1, 2)));
}
