// Ergodic entropic Bellman operator on a simplex grid,
//
//   Tv(pi) = sup_{pi'} [ ln s(pi, pi') + u_gamma( ln<pi', w> + v(G(pi', w)) ) ],
//
// with span-seminorm value iteration, extraction of the optimal constant
// lambda and the argmax policy, the discounted variant iterated over a
// deflation-stage table, and the z-/z+ a-priori bounds used as diagnostics.
//
// The decay term is deterministic given (pi, pi'), so it leaves the certainty
// equivalent by translation invariance; the N x N table of ln s values is
// built once per operator and shared by every sweep.

#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "rsport/costs.hpp"
#include "rsport/entropic.hpp"
#include "rsport/geometry.hpp"
#include "rsport/market.hpp"
#include "rsport/types.hpp"

namespace rsport {

struct SearchConfig {
  bool refine = true;   // sub-grid coordinate descent around the grid argmax
  int refine_levels = 6;  // candidate step halvings: step/2 .. step/2^levels
  InterpMode interp = InterpMode::Linear;
  int threads = 1;
};

// A-priori range of the one-step values z_delta(pi', pi) for any delta
// between gamma and 0.
struct ZBounds {
  double z_minus = 0.0;
  double z_plus = 0.0;
};

// u_gamma( ln<post, w> ) + ln s(pre, post): certainty equivalent of one
// period's log growth after rebalancing pre -> post.
double step_value(const Vector& pre, const Vector& post, const ScenarioSet& scenarios,
                  double gamma, const CostSchedule& schedule);

ZBounds z_bounds(const ScenarioSet& scenarios, double gamma, const CostSchedule& schedule);

// Span seminorm (max - min)/2 over grid values.
double span(const ValueFunction& vf);

// Subtracts (max + min)/2; returns the centered function and the constant.
std::pair<ValueFunction, double> center(const ValueFunction& vf);

class BellmanOperator {
 public:
  BellmanOperator(GridPtr grid, ScenarioSet scenarios, double gamma, CostSchedule schedule,
                  SearchConfig search = {});

  // One sweep: value Tv and the argmax target per grid point.  Per-state
  // maximizations are independent (Jacobi sweep over an immutable table).
  std::pair<ValueFunction, Policy> apply(const ValueFunction& vf) const;

  // Objective of one (state, candidate) pair under continuation value vf;
  // continuation_scale deflates the continuation term (discounted variant).
  double candidate_value(const ValueFunction& vf, Eigen::Index state, const Vector& candidate,
                         double gamma, double continuation_scale = 1.0) const;

  // u_gamma( ln<candidate, w> + continuation_scale * vf(G(candidate, w)) )
  double entropic_payoff(const ValueFunction& vf, const Eigen::Ref<const Vector>& candidate,
                         double gamma, double continuation_scale = 1.0) const;

  double log_decay(Eigen::Index state, Eigen::Index candidate) const {
    return log_decay_(candidate, state);
  }

  const GridPtr& grid() const { return grid_; }
  const ScenarioSet& scenarios() const { return scenarios_; }
  double gamma() const { return gamma_; }
  const CostSchedule& schedule() const { return schedule_; }
  const SearchConfig& search() const { return search_; }

  // Stage sweep shared by the ergodic and discounted solvers: values and
  // (optionally) argmax targets under an explicit risk parameter and
  // continuation deflation.
  void sweep(const ValueFunction& continuation, double gamma, double continuation_scale,
             bool refine, Vector& out_values, Matrix* out_targets) const;

 private:
  GridPtr grid_;
  ScenarioSet scenarios_;
  double gamma_;
  CostSchedule schedule_;
  SearchConfig search_;
  Matrix log_decay_;  // (candidate, state), column-major so states scan contiguously
};

// One-shot operator application (builds the decay table on the fly).
std::pair<ValueFunction, Policy> apply_operator(const ValueFunction& vf,
                                                const ScenarioSet& scenarios, double gamma,
                                                const CostSchedule& schedule,
                                                const SearchConfig& search = {});

struct SolveOptions {
  double tol = 1e-6;
  int max_iter = 200;
  int fixed_iters = 0;  // > 0: run exactly this many sweeps instead of tol stopping
  SearchConfig search;
};

struct SolveReport {
  ValueFunction value;  // centered fixed-point iterate
  Policy policy;
  double lambda_hat = 0.0;        // midpoint of the range of (Tv - v) at termination
  double lambda_halfwidth = 0.0;  // span of (Tv - v): error bar on lambda_hat
  int iterations = 0;
  std::vector<double> span_history;  // span(v_{k+1} - v_k) per sweep
  double residual_span = 0.0;
  bool converged = false;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& msg, SolveReport partial)
      : std::runtime_error(msg), report_(std::move(partial)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

// Value iteration v <- center(Tv) from v = 0.  Stops when the span of the
// update falls below tol (or after exactly fixed_iters sweeps); throws
// NonConvergenceError carrying the partial report if max_iter is exhausted.
SolveReport solve_ergodic(const ScenarioSet& scenarios, double gamma,
                          const CostSchedule& schedule, const GridPtr& grid,
                          const SolveOptions& options = {});

struct DiscountedReport {
  ValueFunction stage0;  // unscaled discounted value at deflation stage 0
  std::vector<double> sup_distances;  // sup |T^{n+1}0 - T^n 0| in scaled units
  std::vector<double> tail_bounds;    // (z+ - z-) |gamma| e^{-n alpha} / (1 - e^{-alpha})
  int stages = 0;
  int iterations = 0;
};

// Iterates the discounted operator on a (grid x deflation-stage) table with
// stage-k risk parameter gamma e^{-alpha k}, truncated once the deflated
// parameter is numerically risk-neutral (|gamma| e^{-alpha K} <= 1e-6).
DiscountedReport solve_discounted(const ScenarioSet& scenarios, double gamma,
                                  const CostSchedule& schedule, const GridPtr& grid,
                                  double alpha, int n_iter, const SearchConfig& search = {});

}  // namespace rsport
