// Simplex-constrained mean-variance optimizer:
//
//   pi* = argmax_{pi in S} pi' mu + (gamma/2) pi' Sigma pi,   gamma < 0.
//
// Solved exactly by enumerating support sets and the associated
// equality-constrained KKT systems; deterministic and exact for the small
// asset counts this library targets (d <= 10).

#pragma once

#include "rsport/market.hpp"
#include "rsport/types.hpp"

namespace rsport {

Vector solve_mean_variance(const Vector& mean, const Matrix& cov, double gamma);

// pi' mu + (gamma/2) pi' Sigma pi
double mean_variance_objective(const Vector& pi, const Vector& mean, const Matrix& cov,
                               double gamma);

// One-step mean/covariance of the log-return law; lets the optimizer run on
// either bundled model family.
std::pair<Vector, Matrix> model_moments(const ReturnModel& model);

}  // namespace rsport
