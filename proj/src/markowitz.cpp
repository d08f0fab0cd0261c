#include "rsport/markowitz.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace rsport {

double mean_variance_objective(const Vector& pi, const Vector& mean, const Matrix& cov,
                               double gamma) {
  return pi.dot(mean) + 0.5 * gamma * pi.dot(cov * pi);
}

Vector solve_mean_variance(const Vector& mean, const Matrix& cov, double gamma) {
  const auto d = mean.size();
  require(d >= 1, "mean-variance: empty mean");
  require(cov.rows() == d && cov.cols() == d, "mean-variance: covariance shape mismatch");
  require(gamma < 0.0, "mean-variance: gamma must be negative");
  require((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-10,
          "mean-variance: covariance not symmetric");
  require(d <= 16, "mean-variance: support enumeration limited to 16 assets");

  Vector best;
  double best_value = -std::numeric_limits<double>::infinity();

  // Every support set in ascending mask order; a concave objective attains
  // its maximum at a stationary point of some face, so enumerating the
  // equality-constrained stationary points of all faces is exhaustive.
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    std::vector<int> support;
    for (int j = 0; j < d; ++j) {
      if (mask & (1u << j)) support.push_back(j);
    }
    const int m = static_cast<int>(support.size());

    // KKT system of max pi' mu + (gamma/2) pi' Sigma pi s.t. sum pi = 1 on
    // the face: [gamma Sigma_AA, 1; 1', 0] [pi; -nu] = [-mu_A; 1]
    Matrix kkt = Matrix::Zero(m + 1, m + 1);
    Vector rhs(m + 1);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) kkt(a, b) = gamma * cov(support[a], support[b]);
      kkt(a, m) = 1.0;
      kkt(m, a) = 1.0;
      rhs[a] = -mean[support[a]];
    }
    rhs[m] = 1.0;

    Eigen::FullPivLU<Matrix> lu(kkt);
    if (!lu.isInvertible()) continue;  // singular face: its maximum lives on a subface
    const Vector solution = lu.solve(rhs);
    bool feasible = true;
    for (int a = 0; a < m; ++a) {
      if (solution[a] < -1e-10) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;

    Vector candidate = Vector::Zero(d);
    for (int a = 0; a < m; ++a) candidate[support[a]] = std::max(0.0, solution[a]);
    candidate /= candidate.sum();
    const double value = mean_variance_objective(candidate, mean, cov, gamma);
    if (value > best_value) {
      best_value = value;
      best = candidate;
    }
  }

  if (best.size() == 0) throw NumericError("mean-variance: no feasible face");
  return best;
}

std::pair<Vector, Matrix> model_moments(const ReturnModel& model) {
  validate_model(model);
  if (const auto* gauss = std::get_if<GaussianReturnModel>(&model)) {
    return {gauss->mean, gauss->cov};
  }
  const auto& discrete = std::get<DiscreteReturnModel>(model);
  const Vector mean = discrete.log_returns.transpose() * discrete.probs;
  const Matrix centered = discrete.log_returns.rowwise() - mean.transpose();
  const Matrix cov =
      centered.transpose() * discrete.probs.asDiagonal() * centered;
  return {mean, cov};
}

}  // namespace rsport
