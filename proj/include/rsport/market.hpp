// One-step return models and their two finite representations: exact
// scenario sets for discrete laws, seeded Monte Carlo scenario sets for
// Gaussian laws, plus reproducible path simulation.  Paths are keyed by
// (seed, path index), so generation order and worker count never change any
// individual path.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <variant>

#include "rsport/types.hpp"

namespace rsport {

// Finite law of the one-step log-return vector.
struct DiscreteReturnModel {
  Matrix log_returns;  // one outcome per row
  Vector probs;
};

// Log-returns r ~ N(mean, cov), per step.
struct GaussianReturnModel {
  Vector mean;
  Matrix cov;
};

using ReturnModel = std::variant<DiscreteReturnModel, GaussianReturnModel>;

// Weighted gross-return vectors w = e^r approximating the one-step law.
struct ScenarioSet {
  Matrix gross;  // one scenario per row, strictly positive
  Vector weights;
};

inline void validate_model(const DiscreteReturnModel& model) {
  require(model.log_returns.rows() >= 1 && model.log_returns.cols() >= 1,
          "discrete model: empty");
  require(model.log_returns.allFinite(), "discrete model: non-finite log-return");
  require(model.probs.size() == model.log_returns.rows(),
          "discrete model: outcome/probability count mismatch");
  require((model.probs.array() >= 0.0).all(), "discrete model: negative probability");
  require(std::abs(model.probs.sum() - 1.0) <= 1e-12,
          "discrete model: probabilities do not sum to 1");
}

inline void validate_model(const GaussianReturnModel& model) {
  const auto d = model.mean.size();
  require(d >= 1, "gaussian model: empty mean");
  require(model.mean.allFinite(), "gaussian model: non-finite mean");
  require(model.cov.rows() == d && model.cov.cols() == d,
          "gaussian model: covariance shape mismatch");
  require(model.cov.allFinite(), "gaussian model: non-finite covariance");
  require((model.cov - model.cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
          "gaussian model: covariance not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(model.cov, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -1e-10,
          "gaussian model: covariance not positive semidefinite");
}

inline void validate_model(const ReturnModel& model) {
  std::visit([](const auto& m) { validate_model(m); }, model);
}

inline int model_dimension(const ReturnModel& model) {
  if (const auto* d = std::get_if<DiscreteReturnModel>(&model)) {
    return static_cast<int>(d->log_returns.cols());
  }
  return static_cast<int>(std::get<GaussianReturnModel>(model).mean.size());
}

inline void validate_scenarios(const ScenarioSet& scenarios) {
  require(scenarios.gross.rows() >= 1, "scenario set: empty");
  require((scenarios.gross.array() > 0.0).all(),
          "scenario set: gross returns must be positive");
  require(scenarios.weights.size() == scenarios.gross.rows(),
          "scenario set: weight count mismatch");
  require((scenarios.weights.array() >= 0.0).all(), "scenario set: negative weight");
  require(std::abs(scenarios.weights.sum() - 1.0) <= 1e-10,
          "scenario set: weights do not sum to 1");
}

// Exact scenario set: one scenario per outcome, w = exp(r) componentwise.
inline ScenarioSet scenarios_from_discrete(const DiscreteReturnModel& model) {
  validate_model(model);
  ScenarioSet out;
  out.gross = model.log_returns.array().exp();
  out.weights = model.probs;
  return out;
}

namespace detail {

// PSD square root via LDLT with clamped pivots; handles rank-deficient and
// exactly-zero covariances that a plain Cholesky rejects.
inline Matrix psd_factor(const Matrix& cov) {
  Eigen::LDLT<Matrix> ldlt(cov);
  if (ldlt.info() != Eigen::Success) {
    throw NumericError("gaussian model: covariance factorization failed");
  }
  Vector diag = ldlt.vectorD();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    require(diag[i] >= -1e-10, "gaussian model: covariance not positive semidefinite");
    diag[i] = diag[i] > 0.0 ? std::sqrt(diag[i]) : 0.0;
  }
  Matrix l = ldlt.matrixL();
  return ldlt.transpositionsP().transpose() * (l * diag.asDiagonal());
}

}  // namespace detail

// n equally weighted draws w = exp(mean + L z) from a seed-reproducible
// normal stream.  One fixed set is shared across all Bellman sweeps (common
// random numbers), which keeps the fixed-point iteration deterministic.
// With antithetic pairing, draws come in (z, -z) pairs.
inline ScenarioSet scenarios_from_gaussian(const GaussianReturnModel& model, int n,
                                           std::uint64_t seed, bool antithetic = false) {
  validate_model(model);
  require(n >= 2, "gaussian scenarios: need at least 2 scenarios");
  require(!antithetic || n % 2 == 0, "gaussian scenarios: antithetic needs even n");
  const auto d = model.mean.size();
  const Matrix factor = detail::psd_factor(model.cov);

  ScenarioSet out;
  out.gross.resize(n, d);
  out.weights = Vector::Constant(n, 1.0 / n);
  SplitMix64 rng = make_stream(seed, 0x5CE4A7105ULL);
  Vector z(d);
  const int draws = antithetic ? n / 2 : n;
  for (int i = 0; i < draws; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.next_normal();
    const Vector r = model.mean + factor * z;
    if (antithetic) {
      out.gross.row(2 * i) = r.array().exp();
      out.gross.row(2 * i + 1) = (2.0 * model.mean - r).array().exp();
    } else {
      out.gross.row(i) = r.array().exp();
    }
  }
  return out;
}

// One gross-return path of the given horizon; row t is the return vector of
// period t+1.  Deterministic function of (seed, path_index).
inline Matrix sample_path(const ReturnModel& model, int horizon, std::uint64_t seed,
                          std::uint64_t path_index) {
  require(horizon >= 1, "sample_path: horizon must be at least 1");
  SplitMix64 rng = make_stream(seed, path_index);
  const int d = model_dimension(model);
  Matrix path(horizon, d);
  if (const auto* discrete = std::get_if<DiscreteReturnModel>(&model)) {
    for (int t = 0; t < horizon; ++t) {
      const double u = rng.next_double();
      double acc = 0.0;
      Eigen::Index pick = discrete->probs.size() - 1;
      for (Eigen::Index o = 0; o < discrete->probs.size(); ++o) {
        acc += discrete->probs[o];
        if (u < acc) {
          pick = o;
          break;
        }
      }
      path.row(t) = discrete->log_returns.row(pick).array().exp();
    }
    return path;
  }
  const auto& gauss = std::get<GaussianReturnModel>(model);
  const Matrix factor = detail::psd_factor(gauss.cov);
  Vector z(d);
  for (int t = 0; t < horizon; ++t) {
    for (int j = 0; j < d; ++j) z[j] = rng.next_normal();
    path.row(t) = (gauss.mean + factor * z).array().exp();
  }
  return path;
}

}  // namespace rsport
