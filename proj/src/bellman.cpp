#include "rsport/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rsport {

double step_value(const Vector& pre, const Vector& post, const ScenarioSet& scenarios,
                  double gamma, const CostSchedule& schedule) {
  check_simplex(pre);
  check_simplex(post);
  validate_scenarios(scenarios);
  const Eigen::Index n = scenarios.gross.rows();
  Vector log_growth(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    log_growth[k] = std::log(scenarios.gross.row(k).dot(post));
  }
  return entropic_utility(log_growth, scenarios.weights, gamma) +
         std::log(decay_factor(pre, post, schedule));
}

ZBounds z_bounds(const ScenarioSet& scenarios, double gamma, const CostSchedule& schedule) {
  require(gamma != 0.0, "z_bounds: defined for gamma != 0 only");
  validate_scenarios(scenarios);
  validate_schedule(schedule);
  const Eigen::Index d = scenarios.gross.cols();
  const Matrix log_returns = scenarios.gross.array().log();

  double min_entropic = std::numeric_limits<double>::infinity();
  double max_entropic = -std::numeric_limits<double>::infinity();
  double max_abs_mean = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double ent = entropic_utility(log_returns.col(i), scenarios.weights, gamma);
    min_entropic = std::min(min_entropic, ent);
    max_entropic = std::max(max_entropic, ent);
    max_abs_mean =
        std::max(max_abs_mean, scenarios.weights.dot(log_returns.col(i).cwiseAbs()));
  }
  const double dim_term = d * max_abs_mean;
  const double log_dim = std::log(static_cast<double>(d)) / std::abs(gamma);
  ZBounds out;
  out.z_minus = -std::abs(min_entropic) - dim_term - log_dim +
                std::log(decay_lower_bound(schedule));
  out.z_plus = std::abs(max_entropic) + dim_term + log_dim;
  return out;
}

double span(const ValueFunction& vf) {
  validate(vf);
  return 0.5 * (vf.values.maxCoeff() - vf.values.minCoeff());
}

std::pair<ValueFunction, double> center(const ValueFunction& vf) {
  validate(vf);
  const double constant = 0.5 * (vf.values.maxCoeff() + vf.values.minCoeff());
  ValueFunction out{vf.grid, vf.values.array() - constant};
  return {out, constant};
}

BellmanOperator::BellmanOperator(GridPtr grid, ScenarioSet scenarios, double gamma,
                                 CostSchedule schedule, SearchConfig search)
    : grid_(std::move(grid)),
      scenarios_(std::move(scenarios)),
      gamma_(gamma),
      schedule_(std::move(schedule)),
      search_(search) {
  require(grid_ != nullptr, "bellman: missing grid");
  validate_scenarios(scenarios_);
  validate_schedule(schedule_);
  require(grid_->dimension() == scenarios_.gross.cols(),
          "bellman: grid/scenario dimension mismatch");
  require(grid_->dimension() == schedule_.buy.size(),
          "bellman: grid/schedule dimension mismatch");

  const Eigen::Index n = grid_->size();
  log_decay_.resize(n, n);
  const int threads = resolve_threads(search_.threads);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t state) {
    const Vector pre = grid_->point(static_cast<Eigen::Index>(state));
    for (Eigen::Index cand = 0; cand < n; ++cand) {
      log_decay_(cand, static_cast<Eigen::Index>(state)) =
          std::log(decay_factor(pre, grid_->point(cand), schedule_));
    }
  });
}

double BellmanOperator::entropic_payoff(const ValueFunction& vf,
                                        const Eigen::Ref<const Vector>& candidate,
                                        double gamma, double continuation_scale) const {
  const Eigen::Index n_scen = scenarios_.gross.rows();
  const int d = grid_->dimension();
  double buffer[kMaxGridDimension];
  Vector stage(n_scen);
  for (Eigen::Index k = 0; k < n_scen; ++k) {
    const auto w = scenarios_.gross.row(k);
    double dot = 0.0;
    for (int j = 0; j < d; ++j) dot += candidate[j] * w[j];
    for (int j = 0; j < d; ++j) buffer[j] = candidate[j] * w[j] / dot;
    const Eigen::Map<const Vector> drifted(buffer, d);
    stage[k] = std::log(dot) + continuation_scale * interpolate(vf, drifted, search_.interp);
  }
  return entropic_utility(stage, scenarios_.weights, gamma);
}

double BellmanOperator::candidate_value(const ValueFunction& vf, Eigen::Index state,
                                        const Vector& candidate, double gamma,
                                        double continuation_scale) const {
  return std::log(decay_factor(grid_->point(state), candidate, schedule_)) +
         entropic_payoff(vf, candidate, gamma, continuation_scale);
}

void BellmanOperator::sweep(const ValueFunction& continuation, double gamma,
                            double continuation_scale, bool refine, Vector& out_values,
                            Matrix* out_targets) const {
  const Eigen::Index n = grid_->size();
  const int d = grid_->dimension();
  const int threads = resolve_threads(search_.threads);

  // Candidate payoffs do not depend on the state, so they are evaluated once
  // per sweep; only the decay term couples state and candidate.
  Vector payoff(n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    payoff[static_cast<Eigen::Index>(i)] =
        entropic_payoff(continuation, grid_->point(static_cast<Eigen::Index>(i)), gamma,
                        continuation_scale);
  });

  out_values.resize(n);
  if (out_targets != nullptr) out_targets->resize(n, d);

  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t s) {
    const auto state = static_cast<Eigen::Index>(s);
    const auto decay_col = log_decay_.col(state);
    Eigen::Index best_idx = 0;
    double best = payoff[0] + decay_col[0];
    for (Eigen::Index i = 1; i < n; ++i) {
      const double value = payoff[i] + decay_col[i];
      if (value > best) {  // ties keep the lexicographically smallest candidate
        best = value;
        best_idx = i;
      }
    }
    Vector best_target = grid_->point(best_idx);

    if (refine) {
      // Coordinate descent along simplex edge directions e_a - e_b with a
      // shrinking step; keeps the candidate on the simplex throughout.
      const Vector state_point = grid_->point(state);
      double delta = grid_->step();
      for (int level = 0; level < search_.refine_levels; ++level) {
        delta *= 0.5;
        bool improved = true;
        int guard = 0;
        while (improved && guard++ < 100) {
          improved = false;
          for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
              if (a == b || best_target[b] <= 0.0) continue;
              Vector trial = best_target;
              const double move = std::min(delta, trial[b]);
              trial[a] += move;
              trial[b] -= move;
              if (trial[b] < 0.0) trial[b] = 0.0;
              const double value =
                  std::log(decay_factor(state_point, trial, schedule_)) +
                  entropic_payoff(continuation, trial, gamma, continuation_scale);
              if (value > best) {
                best = value;
                best_target = trial;
                improved = true;
              }
            }
          }
        }
      }
    }

    if (!std::isfinite(best)) {
      throw NumericError("bellman: non-finite value at grid point " + std::to_string(state));
    }
    out_values[state] = best;
    if (out_targets != nullptr) out_targets->row(state) = best_target.transpose();
  });
}

std::pair<ValueFunction, Policy> BellmanOperator::apply(const ValueFunction& vf) const {
  validate(vf);
  require(vf.grid.get() == grid_.get(), "bellman: value function grid mismatch");
  ValueFunction out{grid_, Vector()};
  Policy policy{grid_, Matrix()};
  sweep(vf, gamma_, 1.0, search_.refine, out.values, &policy.targets);
  return {std::move(out), std::move(policy)};
}

std::pair<ValueFunction, Policy> apply_operator(const ValueFunction& vf,
                                                const ScenarioSet& scenarios, double gamma,
                                                const CostSchedule& schedule,
                                                const SearchConfig& search) {
  BellmanOperator op(vf.grid, scenarios, gamma, schedule, search);
  return op.apply(vf);
}

SolveReport solve_ergodic(const ScenarioSet& scenarios, double gamma,
                          const CostSchedule& schedule, const GridPtr& grid,
                          const SolveOptions& options) {
  require(options.tol > 0.0, "solve_ergodic: tol must be positive");
  require(options.max_iter >= 1, "solve_ergodic: max_iter must be positive");
  BellmanOperator op(grid, scenarios, gamma, schedule, options.search);

  SolveReport report;
  ValueFunction v{grid, Vector::Zero(grid->size())};
  Policy last_policy;
  const int limit = options.fixed_iters > 0 ? options.fixed_iters : options.max_iter;

  for (int iter = 1; iter <= limit; ++iter) {
    auto [tv, policy] = op.apply(v);
    const Vector diff = tv.values - v.values;
    const double diff_span = 0.5 * (diff.maxCoeff() - diff.minCoeff());
    report.span_history.push_back(diff_span);
    report.iterations = iter;

    const bool done =
        options.fixed_iters > 0 ? iter == options.fixed_iters : diff_span <= options.tol;
    if (done) {
      report.lambda_hat = 0.5 * (diff.maxCoeff() + diff.minCoeff());
      report.lambda_halfwidth = diff_span;
      report.residual_span = diff_span;
      report.value = center(tv).first;
      report.policy = std::move(policy);
      report.converged = true;
      return report;
    }
    v = center(tv).first;
    last_policy = std::move(policy);
  }

  // tol mode ran out of iterations: hand back what we have
  report.residual_span = report.span_history.back();
  report.value = v;
  report.policy = std::move(last_policy);
  report.converged = false;
  throw NonConvergenceError("solve_ergodic: span residual " +
                                std::to_string(report.residual_span) + " above tol after " +
                                std::to_string(report.iterations) + " iterations",
                            report);
}

DiscountedReport solve_discounted(const ScenarioSet& scenarios, double gamma,
                                  const CostSchedule& schedule, const GridPtr& grid,
                                  double alpha, int n_iter, const SearchConfig& search) {
  require(alpha > 0.0, "solve_discounted: alpha must be positive");
  require(gamma != 0.0, "solve_discounted: gamma must be nonzero");
  require(n_iter >= 1, "solve_discounted: n_iter must be positive");

  BellmanOperator op(grid, scenarios, gamma, schedule, search);
  const ZBounds bounds = z_bounds(scenarios, gamma, schedule);
  const double contraction = std::exp(-alpha);

  // Deflation stages gamma, gamma e^{-alpha}, ...; frozen once numerically
  // risk-neutral.  The last stage continues into itself.
  const int stages =
      std::max(1, static_cast<int>(std::ceil(std::log(std::abs(gamma) / 1e-6) / alpha)));
  const Eigen::Index n = grid->size();

  std::vector<Vector> table(stages + 1, Vector::Zero(n));
  std::vector<Vector> next(stages + 1, Vector::Zero(n));

  DiscountedReport report;
  report.stages = stages + 1;

  for (int iter = 0; iter < n_iter; ++iter) {
    double sup_dist = 0.0;
    for (int k = 0; k <= stages; ++k) {
      const double stage_gamma = gamma * std::pow(contraction, k);
      const ValueFunction continuation{grid, table[std::min(k + 1, stages)]};
      op.sweep(continuation, stage_gamma, contraction, false, next[k], nullptr);
      const double scale = std::abs(stage_gamma);
      sup_dist = std::max(sup_dist, scale * (next[k] - table[k]).cwiseAbs().maxCoeff());
    }
    std::swap(table, next);
    report.sup_distances.push_back(sup_dist);
    report.tail_bounds.push_back((bounds.z_plus - bounds.z_minus) * std::abs(gamma) *
                                 std::exp(-alpha * iter) / (1.0 - contraction));
    report.iterations = iter + 1;
  }

  report.stage0 = ValueFunction{grid, table[0]};
  return report;
}

}  // namespace rsport
