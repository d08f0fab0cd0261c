// Proportional transaction costs: the penalty d(x) = <c,[x]+> + <h,[x]->,
// and the capital decay factor s(pre, post), i.e. the fraction of wealth that
// survives a rebalance from weights `pre` to weights `post`.  The decay is
// the unique root w of
//
//   F(w) = w + d(w * post - pre) = 1,
//
// which exists in [s_tilde, 1] for any cost rates in (0,1).  F is
// piecewise-linear and strictly increasing in w, so plain bisection is
// unconditionally convergent; Newton-type steps can chatter at the kinks
// where w * post_j == pre_j.

#pragma once

#include <Eigen/Core>

#include <cmath>

#include "rsport/types.hpp"

namespace rsport {

// Per-asset buy rates (c) and sell rates (h), each strictly inside (0, 1).
struct CostSchedule {
  Vector buy;
  Vector sell;
};

inline void validate_schedule(const CostSchedule& schedule) {
  require(schedule.buy.size() == schedule.sell.size(),
          "cost schedule: buy/sell size mismatch");
  require(schedule.buy.size() > 0, "cost schedule: empty");
  require((schedule.buy.array() > 0.0).all() && (schedule.buy.array() < 1.0).all(),
          "cost schedule: buy rates must lie in (0,1)");
  require((schedule.sell.array() > 0.0).all() && (schedule.sell.array() < 1.0).all(),
          "cost schedule: sell rates must lie in (0,1)");
}

// d(x): cost of trading the signed notional vector x (positive = buy).
inline double penalty(const Eigen::Ref<const Vector>& x, const CostSchedule& schedule) {
  require(x.size() == schedule.buy.size(), "penalty: dimension mismatch");
  double cost = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    cost += x[j] > 0.0 ? schedule.buy[j] * x[j] : -schedule.sell[j] * x[j];
  }
  return cost;
}

// Guaranteed lower bound s_tilde = (1-m)/(1+m) with m the largest cost rate:
// d(w*y - x) <= m (w + 1) for simplex x, y, hence F((1-m)/(1+m)) <= 1.
inline double decay_lower_bound(const CostSchedule& schedule) {
  validate_schedule(schedule);
  const double m = std::max(schedule.buy.maxCoeff(), schedule.sell.maxCoeff());
  return (1.0 - m) / (1.0 + m);
}

namespace detail {

// F(w) - 1 without temporaries; hot path of the N^2 decay table.
inline double decay_residual(double w, const Eigen::Ref<const Vector>& pre,
                             const Eigen::Ref<const Vector>& post,
                             const CostSchedule& schedule) {
  double r = w - 1.0;
  for (Eigen::Index j = 0; j < pre.size(); ++j) {
    const double traded = w * post[j] - pre[j];
    r += traded > 0.0 ? schedule.buy[j] * traded : -schedule.sell[j] * traded;
  }
  return r;
}

}  // namespace detail

// Solves F(w) = 1 by bisection on [s_tilde*(1-1e-6), 1+1e-12] to the given
// residual tolerance; the result is clamped back to [s_tilde, 1].
// pre == post short-circuits to exactly 1 (no trade, no cost).
inline double decay_factor(const Eigen::Ref<const Vector>& pre,
                           const Eigen::Ref<const Vector>& post,
                           const CostSchedule& schedule, double tol = 1e-12) {
  require(pre.size() == post.size() && pre.size() == schedule.buy.size(),
          "decay_factor: dimension mismatch");
  require(tol > 0.0, "decay_factor: tol must be positive");
  const double at_one = detail::decay_residual(1.0, pre, post, schedule);
  if (at_one == 0.0) return 1.0;

  const double s_tilde = decay_lower_bound(schedule);
  double lo = s_tilde * (1.0 - 1e-6);
  double hi = 1.0 + 1e-12;
  if (detail::decay_residual(lo, pre, post, schedule) > 0.0) {
    // cannot happen for simplex inputs and a valid schedule
    throw NumericError("decay_factor: bisection bracket failure");
  }
  double w = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    w = 0.5 * (lo + hi);
    const double r = detail::decay_residual(w, pre, post, schedule);
    if (std::abs(r) <= tol) break;
    if (r > 0.0) {
      hi = w;
    } else {
      lo = w;
    }
  }
  return std::min(1.0, std::max(s_tilde, w));
}

}  // namespace rsport
