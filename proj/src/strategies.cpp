#include "rsport/strategies.hpp"

#include <cmath>
#include <utility>

namespace rsport {

Strategy Strategy::buy_and_hold(int asset, int dimension) {
  require(dimension >= 1 && asset >= 0 && asset < dimension,
          "buy-and-hold: asset index out of range");
  Strategy s;
  s.kind = Kind::BuyAndHold;
  s.asset = asset;
  s.initial = Vector::Zero(dimension);
  s.initial[asset] = 1.0;
  s.label = "buy-and-hold-" + std::to_string(asset + 1);
  return s;
}

Strategy Strategy::fixed_mix(Vector target, std::string label) {
  check_simplex(target);
  Strategy s;
  s.kind = Kind::FixedMix;
  s.target = std::move(target);
  s.label = std::move(label);
  return s;
}

Strategy Strategy::bellman(Policy policy, double snap_eta, std::string label) {
  require(policy.grid != nullptr, "bellman strategy: missing policy");
  require(snap_eta > 0.0, "bellman strategy: snap_eta must be positive");
  Strategy s;
  s.kind = Kind::Bellman;
  s.policy = std::move(policy);
  s.snap_eta = snap_eta;
  s.label = std::move(label);
  return s;
}

Strategy Strategy::none(Vector initial, std::string label) {
  check_simplex(initial);
  Strategy s;
  s.kind = Kind::None;
  s.initial = std::move(initial);
  s.label = std::move(label);
  return s;
}

Vector initial_weights(const Strategy& strategy, int dimension) {
  if (strategy.initial.size() > 0) {
    require(strategy.initial.size() == dimension, "strategy: initial weight dimension");
    return strategy.initial;
  }
  return Vector::Constant(dimension, 1.0 / dimension);
}

Vector decide(const Strategy& strategy, const Vector& pre) {
  switch (strategy.kind) {
    case Strategy::Kind::BuyAndHold:
    case Strategy::Kind::None:
      return pre;
    case Strategy::Kind::FixedMix:
      return strategy.target;
    case Strategy::Kind::Bellman: {
      Vector target = interpolate_target(strategy.policy, pre);
      if ((target - pre).cwiseAbs().sum() <= strategy.snap_eta) return pre;
      return target;
    }
  }
  throw ValidationError("strategy: unknown kind");
}

WealthPath simulate_wealth(const Strategy& strategy, const Matrix& gross_path,
                           const CostSchedule& schedule, double w0) {
  require(w0 > 0.0, "simulate_wealth: initial capital must be positive");
  require(gross_path.rows() >= 1, "simulate_wealth: empty path");
  require((gross_path.array() > 0.0).all(),
          "simulate_wealth: gross returns must be positive");
  const int d = static_cast<int>(gross_path.cols());
  require(schedule.buy.size() == d, "simulate_wealth: schedule dimension mismatch");
  const auto horizon = gross_path.rows();

  WealthPath out;
  out.log_wealth.reserve(horizon + 1);
  out.pre_weights.resize(horizon, d);
  out.post_weights.resize(horizon, d);
  out.decays.assign(horizon, 1.0);
  out.traded.assign(horizon, 0);

  double log_wealth = std::log(w0);
  out.log_wealth.push_back(log_wealth);
  Vector pre = initial_weights(strategy, d);

  for (Eigen::Index t = 0; t < horizon; ++t) {
    Vector post = decide(strategy, pre);
    double decay = 1.0;
    if ((post - pre).cwiseAbs().sum() <= 1e-12) {
      post = pre;  // sub-tolerance adjustments carry no cost
    } else {
      decay = decay_factor(pre, post, schedule);
      out.traded[t] = 1;
    }
    out.pre_weights.row(t) = pre.transpose();
    out.post_weights.row(t) = post.transpose();
    out.decays[t] = decay;

    const double growth = gross_path.row(t).dot(post);
    log_wealth += std::log(decay) + std::log(growth);
    out.log_wealth.push_back(log_wealth);
    pre = drift(post, gross_path.row(t).transpose());
  }
  out.final_weights = pre;
  return out;
}

VolumeStep volume_oracle_step(const Vector& volumes_prev, const Vector& prices,
                              const Vector& target, const CostSchedule& schedule) {
  require(volumes_prev.size() == prices.size() && prices.size() == target.size(),
          "volume oracle: dimension mismatch");
  require((prices.array() > 0.0).all(), "volume oracle: prices must be positive");
  require((volumes_prev.array() >= 0.0).all(), "volume oracle: negative volume");
  check_simplex(target);

  const Vector held_value = volumes_prev.cwiseProduct(prices);
  const double wealth_pre = held_value.sum();
  require(wealth_pre > 0.0, "volume oracle: empty portfolio");

  // g(W) = W + d(W * target - held_value) - W_pre, increasing in W
  const auto residual = [&](double wealth) {
    return wealth + penalty(wealth * target - held_value, schedule) - wealth_pre;
  };
  double wealth = wealth_pre;
  if (residual(wealth_pre) != 0.0) {
    double lo = decay_lower_bound(schedule) * wealth_pre * (1.0 - 1e-6);
    double hi = wealth_pre * (1.0 + 1e-12);
    if (residual(lo) > 0.0) throw NumericError("volume oracle: bracket failure");
    for (int it = 0; it < 200; ++it) {
      wealth = 0.5 * (lo + hi);
      const double r = residual(wealth);
      if (std::abs(r) <= 1e-12 * wealth_pre) break;
      (r > 0.0 ? hi : lo) = wealth;
    }
  }
  VolumeStep out;
  out.wealth = wealth;
  out.volumes = wealth * target.cwiseQuotient(prices);
  return out;
}

}  // namespace rsport
