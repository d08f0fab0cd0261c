// Shared fixtures: the two bundled market setups and small random helpers.

#pragma once

#include <cmath>

#include "rsport/costs.hpp"
#include "rsport/market.hpp"
#include "rsport/types.hpp"

namespace rsport::fixtures {

// two-asset finite model: r = (ln 1.5, ln 0.5) or (ln 0.6, ln 1.8), p = 1/2
inline DiscreteReturnModel toy_model() {
  DiscreteReturnModel model;
  model.log_returns.resize(2, 2);
  model.log_returns << std::log(1.5), std::log(0.5), std::log(0.6), std::log(1.8);
  model.probs = Vector::Constant(2, 0.5);
  return model;
}

inline CostSchedule toy_costs() {
  CostSchedule schedule;
  schedule.buy = Vector(2);
  schedule.buy << 0.1, 0.2;
  schedule.sell = Vector(2);
  schedule.sell << 0.2, 0.1;
  return schedule;
}

// three-asset correlated Gaussian model with drift
inline GaussianReturnModel gauss_model() {
  GaussianReturnModel model;
  model.mean = Vector(3);
  model.mean << 0.0025, 0.0015, 0.002;
  model.cov.resize(3, 3);
  model.cov << 3.0, -1.0, -0.5, -1.0, 1.5, 0.5, -0.5, 0.5, 2.0;
  model.cov *= 0.0008;
  return model;
}

inline CostSchedule gauss_costs() {
  CostSchedule schedule;
  schedule.buy = Vector(3);
  schedule.buy << 0.008, 0.0064, 0.004;
  schedule.sell = Vector(3);
  schedule.sell << 0.004, 0.0064, 0.008;
  return schedule;
}

inline CostSchedule near_zero_costs(int d) {
  CostSchedule schedule;
  schedule.buy = Vector::Constant(d, 1e-9);
  schedule.sell = Vector::Constant(d, 1e-9);
  return schedule;
}

inline Vector random_weights(SplitMix64& rng, int d) {
  Vector w(d);
  for (int j = 0; j < d; ++j) w[j] = 0.01 + rng.next_double();
  return w / w.sum();
}

}  // namespace rsport::fixtures
