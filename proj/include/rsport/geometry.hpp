// Simplex state space: weight validation, the post-return drift map
// G(x, y) = x.*y / <x, y>, the regular lattice grid on the unit simplex, and
// continuous piecewise-linear interpolation of grid functions.
//
// Interpolation uses the standard lattice triangulation of the dilated
// simplex expressed in cumulative coordinates y_j = u_1 + ... + u_j: in those
// coordinates the simplex is a union of Kuhn (Freudenthal) cells, so sorting
// the fractional parts yields the containing cell and exact barycentric
// weights.  The scheme reproduces affine functions and is exact at nodes.

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "rsport/types.hpp"

namespace rsport {

inline constexpr int kMaxGridDimension = 8;

inline void check_simplex(const Eigen::Ref<const Vector>& w, double tol = 1e-10) {
  require(w.size() >= 1, "weights: empty vector");
  require(w.allFinite(), "weights: non-finite component");
  require((w.array() >= -1e-12).all(), "weights: negative component");
  require(std::abs(w.sum() - 1.0) <= tol, "weights: components do not sum to 1");
}

// Repairs harmless floating-point drift (components at -1e-12..0, sums a few
// ulps off 1); anything worse is treated as a real bug and rejected.
inline Vector snap_to_simplex(Vector w) {
  require(w.size() >= 1 && w.allFinite(), "weights: invalid vector");
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (w[j] < 0.0) {
      require(w[j] >= -1e-12, "weights: negative component beyond tolerance");
      w[j] = 0.0;
    }
  }
  const double total = w.sum();
  require(std::abs(total - 1.0) <= 1e-8, "weights: component sum too far from 1");
  return w / total;
}

// G(pi, w): weights after one period of gross returns w, before any trading.
inline Vector drift(const Eigen::Ref<const Vector>& pi,
                    const Eigen::Ref<const Vector>& gross) {
  require(pi.size() == gross.size(), "drift: dimension mismatch");
  require((gross.array() > 0.0).all(), "drift: gross returns must be positive");
  Vector out = pi.cwiseProduct(gross);
  const double total = out.sum();
  if (!(total > 0.0)) throw NumericError("drift: degenerate weight/return pair");
  return out / total;
}

// All lattice points {k * step : k in N_0^d, sum_j k_j * step = 1}, ordered
// lexicographically by lattice coordinates.  Ordinals are recovered in O(d)
// from a binomial table, which keeps interpolation stencils allocation-free.
class SimplexGrid {
 public:
  static SimplexGrid build(int dimension, double step) {
    require(dimension >= 2, "grid: dimension must be at least 2");
    require(dimension <= kMaxGridDimension, "grid: dimension too large");
    require(step > 0.0 && step <= 1.0, "grid: step must lie in (0,1]");
    const double levels_real = 1.0 / step;
    const double rounded = std::round(levels_real);
    require(std::abs(levels_real - rounded) <= 1e-9 * levels_real,
            "grid: 1/step must be an integer");

    SimplexGrid grid;
    grid.dimension_ = dimension;
    grid.step_ = step;
    grid.levels_ = static_cast<int>(rounded);
    grid.build_binomials();

    const double count = grid.binomial_checked(grid.levels_ + dimension - 1, dimension - 1);
    require(count < 5e7, "grid: too many points");
    const auto n = static_cast<Eigen::Index>(count);

    grid.lattice_.resize(n, dimension);
    grid.points_.resize(n, dimension);
    std::vector<int> coords(dimension, 0);
    Eigen::Index row = 0;
    grid.enumerate(coords, 0, grid.levels_, row);
    return grid;
  }

  int dimension() const { return dimension_; }
  double step() const { return step_; }
  int levels() const { return levels_; }
  Eigen::Index size() const { return points_.rows(); }
  const Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>& lattice() const { return lattice_; }
  const Matrix& points() const { return points_; }
  Vector point(Eigen::Index i) const { return points_.row(i).transpose(); }

  // Lexicographic rank of a lattice coordinate vector, or -1 if invalid.
  Eigen::Index ordinal(const int* coords) const {
    long long remaining = levels_;
    double rank = 0.0;
    for (int j = 0; j < dimension_ - 1; ++j) {
      const int k = coords[j];
      if (k < 0 || k > remaining) return -1;
      const int parts = dimension_ - 1 - j;
      // sum_{t < k} C(remaining - t + parts - 1, parts - 1), telescoped
      rank += binomial(remaining + parts, parts) - binomial(remaining - k + parts, parts);
      remaining -= k;
    }
    if (coords[dimension_ - 1] != remaining) return -1;
    return static_cast<Eigen::Index>(rank);
  }

  struct Stencil {
    int count = 0;
    std::array<Eigen::Index, kMaxGridDimension + 1> vertex{};
    std::array<double, kMaxGridDimension + 1> weight{};
  };

  // Containing-cell vertices and barycentric weights for a simplex point.
  Stencil locate(const Eigen::Ref<const Vector>& pi) const {
    const int d = dimension_;
    require(pi.size() == d, "grid: query dimension mismatch");
    // cumulative lattice coordinates; y is nondecreasing with y_d = levels
    std::array<double, kMaxGridDimension> y{};
    {
      double acc = 0.0;
      for (int j = 0; j < d - 1; ++j) {
        acc += std::max(0.0, pi[j]) / step_;
        y[j] = std::min(acc, static_cast<double>(levels_));
        // snap to the lattice so boundary queries use on-simplex vertices
        const double nearest = std::round(y[j]);
        if (std::abs(y[j] - nearest) < 1e-9) y[j] = nearest;
        if (j > 0) y[j] = std::max(y[j], y[j - 1]);
      }
    }
    std::array<int, kMaxGridDimension> base{};
    std::array<double, kMaxGridDimension> frac{};
    std::array<int, kMaxGridDimension> order{};
    for (int j = 0; j < d - 1; ++j) {
      base[j] = std::min(static_cast<int>(std::floor(y[j])), levels_);
      frac[j] = y[j] - base[j];
      order[j] = j;
    }
    // descending fractional part; ties resolved toward the higher index so
    // the vertex chain stays inside the ordered region y_j <= y_{j+1}
    std::sort(order.begin(), order.begin() + (d - 1), [&](int a, int b) {
      if (frac[a] != frac[b]) return frac[a] > frac[b];
      return a > b;
    });

    Stencil st;
    std::array<int, kMaxGridDimension> cursor = base;
    std::array<int, kMaxGridDimension> coords{};
    const auto emit = [&](double weight) {
      if (weight <= 1e-14) return;
      int prev = 0;
      for (int j = 0; j < d - 1; ++j) {
        coords[j] = cursor[j] - prev;
        prev = cursor[j];
      }
      coords[d - 1] = levels_ - prev;
      const Eigen::Index ord = ordinal(coords.data());
      if (ord < 0) throw NumericError("grid: interpolation query left the simplex");
      st.vertex[st.count] = ord;
      st.weight[st.count] = weight;
      ++st.count;
    };

    double prev_frac = 1.0;
    for (int r = 0; r < d - 1; ++r) {
      const double f = frac[order[r]];
      emit(prev_frac - f);
      cursor[order[r]] += 1;
      prev_frac = f;
    }
    emit(prev_frac);

    // weights form a convex combination by construction; renormalize the
    // dropped near-zero entries away
    double total = 0.0;
    for (int i = 0; i < st.count; ++i) total += st.weight[i];
    for (int i = 0; i < st.count; ++i) st.weight[i] /= total;
    return st;
  }

 private:
  void build_binomials() {
    // C(n, r) for r <= dimension, exact in double for every grid we accept
    binom_.assign(static_cast<std::size_t>(levels_ + dimension_ + 1) * (dimension_ + 1), 0.0);
    for (int n = 0; n <= levels_ + dimension_; ++n) {
      binom_at(n, 0) = 1.0;
      for (int r = 1; r <= std::min(n, dimension_); ++r) {
        binom_at(n, r) = binom_at(n - 1, r - 1) + (n - 1 >= r ? binom_at(n - 1, r) : 0.0);
      }
    }
  }

  double& binom_at(int n, int r) {
    return binom_[static_cast<std::size_t>(n) * (dimension_ + 1) + r];
  }
  double binomial(long long n, int r) const {
    if (n < 0 || r < 0 || r > n) return 0.0;
    return binom_[static_cast<std::size_t>(n) * (dimension_ + 1) + r];
  }
  double binomial_checked(long long n, int r) const {
    require(n >= 0 && r >= 0 && r <= n && r <= dimension_, "grid: binomial out of range");
    return binom_[static_cast<std::size_t>(n) * (dimension_ + 1) + r];
  }

  void enumerate(std::vector<int>& coords, int pos, int remaining, Eigen::Index& row) {
    if (pos == dimension_ - 1) {
      coords[pos] = remaining;
      for (int j = 0; j < dimension_; ++j) {
        lattice_(row, j) = coords[j];
        points_(row, j) = coords[j] * step_;
      }
      ++row;
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      coords[pos] = k;
      enumerate(coords, pos + 1, remaining - k, row);
    }
  }

  int dimension_ = 0;
  double step_ = 0.0;
  int levels_ = 0;
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> lattice_;
  Matrix points_;
  std::vector<double> binom_;
};

using GridPtr = std::shared_ptr<const SimplexGrid>;

inline GridPtr build_grid(int dimension, double step) {
  return std::make_shared<SimplexGrid>(SimplexGrid::build(dimension, step));
}

// Grid-indexed scalar function.
struct ValueFunction {
  GridPtr grid;
  Vector values;
};

// Grid-indexed rebalancing targets (one simplex point per state).
struct Policy {
  GridPtr grid;
  Matrix targets;  // size() x dimension
};

inline void validate(const ValueFunction& vf) {
  require(vf.grid != nullptr, "value function: missing grid");
  require(vf.values.size() == vf.grid->size(), "value function: size mismatch");
  require(vf.values.allFinite(), "value function: non-finite value");
}

inline void validate(const Policy& policy) {
  require(policy.grid != nullptr, "policy: missing grid");
  require(policy.targets.rows() == policy.grid->size() &&
              policy.targets.cols() == policy.grid->dimension(),
          "policy: shape mismatch");
  for (Eigen::Index i = 0; i < policy.targets.rows(); ++i) {
    check_simplex(policy.targets.row(i).transpose());
  }
}

enum class InterpMode { Linear, Nearest };

inline double interpolate(const ValueFunction& vf, const Eigen::Ref<const Vector>& pi,
                          InterpMode mode = InterpMode::Linear) {
  const auto st = vf.grid->locate(pi);
  if (mode == InterpMode::Nearest) {
    int best = 0;
    for (int i = 1; i < st.count; ++i) {
      if (st.weight[i] > st.weight[best]) best = i;
    }
    return vf.values[st.vertex[best]];
  }
  double out = 0.0;
  for (int i = 0; i < st.count; ++i) out += st.weight[i] * vf.values[st.vertex[i]];
  return out;
}

// Barycentric blend of per-vertex targets; a convex combination of simplex
// points, so the result is itself on the simplex.
inline Vector interpolate_target(const Policy& policy, const Eigen::Ref<const Vector>& pi) {
  const auto st = policy.grid->locate(pi);
  Vector out = Vector::Zero(policy.grid->dimension());
  for (int i = 0; i < st.count; ++i) {
    out += st.weight[i] * policy.targets.row(st.vertex[i]).transpose();
  }
  return out;
}

}  // namespace rsport
