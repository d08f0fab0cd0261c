// Entropic utility (certainty equivalent) of finite weighted samples,
//
//   u_gamma(X) = (1/gamma) * ln E[exp(gamma * X)],   u_0(X) = E[X],
//
// evaluated through a max-shifted log-sum-exp so that |gamma * x| up to ~700
// stays finite.  gamma < 0 is risk-averse, gamma > 0 risk-seeking, gamma == 0
// is handled as the expectation rather than by small-gamma substitution.

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>

#include "rsport/types.hpp"

namespace rsport {

// Finite weighted sample representing the law of a scalar random variable.
struct WeightedSample {
  Vector values;
  Vector probs;
};

inline void validate_sample(const WeightedSample& sample) {
  require(sample.values.size() == sample.probs.size(),
          "weighted sample: values/probs size mismatch");
  require(sample.values.size() > 0, "weighted sample: empty");
  require(sample.values.allFinite(), "weighted sample: non-finite value");
  require((sample.probs.array() >= 0.0).all(), "weighted sample: negative probability");
  require(std::abs(sample.probs.sum() - 1.0) <= 1e-12,
          "weighted sample: probabilities do not sum to 1");
}

// Core kernel shared by the sample overload and the Bellman sweep.  values
// and log-weighted probabilities are combined as a_i = gamma*x_i + ln p_i and
// reduced by log-sum-exp around the maximum.
inline double entropic_utility(const Eigen::Ref<const Vector>& values,
                               const Eigen::Ref<const Vector>& probs, double gamma) {
  const Eigen::Index n = values.size();
  if (gamma == 0.0) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc += probs[i] * values[i];
    return acc;
  }
  double shift = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (probs[i] <= 0.0) continue;
    shift = std::max(shift, gamma * values[i]);
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (probs[i] <= 0.0) continue;
    sum += probs[i] * std::exp(gamma * values[i] - shift);
  }
  return (shift + std::log(sum)) / gamma;
}

inline double entropic_utility(const WeightedSample& sample, double gamma) {
  validate_sample(sample);
  return entropic_utility(sample.values, sample.probs, gamma);
}

// Exact certainty equivalent of a Gaussian: mean + (gamma/2) * variance.
// Used as a closed-form oracle against the sampled evaluation.
inline double gaussian_entropic(double mean, double variance, double gamma) {
  require(variance >= 0.0, "gaussian_entropic: negative variance");
  return mean + 0.5 * gamma * variance;
}

// Second-order expansion of the entropic utility around gamma = 0.  The
// formula coincides with gaussian_entropic; it is kept as a separate
// reporting operation because performance tables quote it as its own column.
inline double taylor_proxy(double mean, double variance, double gamma) {
  require(variance >= 0.0, "taylor_proxy: negative variance");
  return mean + 0.5 * gamma * variance;
}

}  // namespace rsport
