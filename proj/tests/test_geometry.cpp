// Simplex geometry: the drift map, grid enumeration (against binomial
// counts), and barycentric interpolation (node exactness, affine
// reproduction, monotone bounds).

#include <doctest.h>

#include <cmath>

#include "rsport/geometry.hpp"
#include "rsport/types.hpp"

using namespace rsport;

namespace {

Vector random_weights(SplitMix64& rng, int d) {
  Vector w(d);
  for (int j = 0; j < d; ++j) w[j] = 0.01 + rng.next_double();
  return w / w.sum();
}

}  // namespace

TEST_CASE("drift examples") {
  Vector pi(2);
  pi << 0.5, 0.5;
  CHECK((drift(pi, Vector::Ones(2)) - pi).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  Vector w(2);
  w << 1.5, 0.5;
  const Vector moved = drift(pi, w);
  CHECK(moved[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(moved[1] == doctest::Approx(0.25).epsilon(1e-14));

  // first component of G((p', 1-p'), (1.5, 0.5)) is 3p'/(2p'+1)
  for (const double p : {0.1, 0.37, 0.62, 0.93}) {
    Vector state(2);
    state << p, 1.0 - p;
    CHECK(drift(state, w)[0] == doctest::Approx(3.0 * p / (2.0 * p + 1.0)).epsilon(1e-13));
  }

  Vector bad(2);
  bad << 1.0, -0.5;
  CHECK_THROWS_AS(drift(pi, bad), ValidationError);
}

TEST_CASE("drift properties") {
  SplitMix64 rng = make_stream(37, 0);
  for (int it = 0; it < 1200; ++it) {
    const int d = 2 + static_cast<int>(rng.next_u64() % 5);
    const Vector pi = random_weights(rng, d);
    Vector w(d);
    for (int j = 0; j < d; ++j) w[j] = 0.1 + 3.0 * rng.next_double();
    const Vector moved = drift(pi, w);
    REQUIRE(std::abs(moved.sum() - 1.0) <= 1e-12);
    REQUIRE((moved.array() >= 0.0).all());
    // scale invariance in the gross returns
    const double alpha = 0.2 + 5.0 * rng.next_double();
    REQUIRE((drift(pi, alpha * w) - moved).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("grid enumeration") {
  const auto coarse = build_grid(2, 0.5);
  REQUIRE(coarse->size() == 3);
  CHECK(coarse->points()(0, 0) == doctest::Approx(0.0));
  CHECK(coarse->points()(0, 1) == doctest::Approx(1.0));
  CHECK(coarse->points()(1, 0) == doctest::Approx(0.5));
  CHECK(coarse->points()(1, 1) == doctest::Approx(0.5));
  CHECK(coarse->points()(2, 0) == doctest::Approx(1.0));
  CHECK(coarse->points()(2, 1) == doctest::Approx(0.0));

  CHECK(build_grid(3, 0.5)->size() == 6);      // C(4,2)
  CHECK(build_grid(3, 0.02)->size() == 1326);  // C(52,2)
  CHECK(build_grid(2, 0.005)->size() == 201);
  CHECK(build_grid(4, 0.25)->size() == 35);    // C(7,3)

  CHECK_THROWS_AS(build_grid(2, 0.3), ValidationError);   // 1/step not integral
  CHECK_THROWS_AS(build_grid(1, 0.5), ValidationError);
}

TEST_CASE("ordinal lookup is the inverse of enumeration") {
  for (const auto& grid : {build_grid(2, 0.1), build_grid(3, 0.125), build_grid(5, 0.25)}) {
    for (Eigen::Index i = 0; i < grid->size(); ++i) {
      std::vector<int> coords(grid->dimension());
      for (int j = 0; j < grid->dimension(); ++j) coords[j] = grid->lattice()(i, j);
      REQUIRE(grid->ordinal(coords.data()) == i);
    }
  }
}

TEST_CASE("interpolation reproduces grid nodes exactly") {
  const auto grid = build_grid(3, 0.25);
  SplitMix64 rng = make_stream(41, 0);
  ValueFunction vf{grid, Vector(grid->size())};
  for (Eigen::Index i = 0; i < grid->size(); ++i) vf.values[i] = rng.next_double();
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    REQUIRE(interpolate(vf, grid->point(i)) == doctest::Approx(vf.values[i]).epsilon(1e-14));
  }
}

TEST_CASE("interpolation reproduces affine functions") {
  SplitMix64 rng = make_stream(43, 0);
  for (const int d : {2, 3, 4}) {
    const auto grid = build_grid(d, d == 4 ? 0.25 : 0.125);
    Vector a(d);
    for (int j = 0; j < d; ++j) a[j] = 2.0 * rng.next_double() - 1.0;
    const double b = rng.next_double();
    ValueFunction vf{grid, Vector(grid->size())};
    for (Eigen::Index i = 0; i < grid->size(); ++i) {
      vf.values[i] = a.dot(grid->point(i)) + b;
    }
    for (int it = 0; it < 400; ++it) {
      const Vector pi = random_weights(rng, d);
      REQUIRE(interpolate(vf, pi) == doctest::Approx(a.dot(pi) + b).epsilon(1e-10));
    }
    // boundary queries (zero components) stay on valid lattice vertices
    for (int it = 0; it < 200; ++it) {
      Vector pi = random_weights(rng, d);
      pi[static_cast<int>(rng.next_u64() % d)] = 0.0;
      pi /= pi.sum();
      REQUIRE(interpolate(vf, pi) == doctest::Approx(a.dot(pi) + b).epsilon(1e-10));
    }
  }
}

TEST_CASE("interpolation is bounded by grid extremes") {
  const auto grid = build_grid(3, 0.1);
  SplitMix64 rng = make_stream(47, 0);
  ValueFunction vf{grid, Vector(grid->size())};
  for (Eigen::Index i = 0; i < grid->size(); ++i) vf.values[i] = 5.0 * rng.next_double();
  const double lo = vf.values.minCoeff();
  const double hi = vf.values.maxCoeff();
  for (int it = 0; it < 1000; ++it) {
    const double v = interpolate(vf, random_weights(rng, 3));
    REQUIRE(v >= lo - 1e-12);
    REQUIRE(v <= hi + 1e-12);
  }
}

TEST_CASE("constant functions interpolate to the constant") {
  const auto grid = build_grid(4, 0.2);
  ValueFunction vf{grid, Vector::Constant(grid->size(), 3.25)};
  SplitMix64 rng = make_stream(53, 0);
  for (int it = 0; it < 200; ++it) {
    REQUIRE(interpolate(vf, random_weights(rng, 4)) == doctest::Approx(3.25).epsilon(1e-14));
  }
}

TEST_CASE("interpolation is continuous across cell boundaries") {
  // a conforming triangulation has matching limits on shared facets; probe
  // symmetric two-sided differences along simplex-preserving directions
  SplitMix64 rng = make_stream(151, 0);
  for (const int d : {2, 3, 4}) {
    const auto grid = build_grid(d, 0.125);
    ValueFunction vf{grid, Vector(grid->size())};
    for (Eigen::Index i = 0; i < grid->size(); ++i) vf.values[i] = rng.next_double();
    for (int it = 0; it < 500; ++it) {
      Vector x = random_weights(rng, d);
      const int a = static_cast<int>(rng.next_u64() % d);
      int b = static_cast<int>(rng.next_u64() % d);
      if (a == b) b = (b + 1) % d;
      const double eps = 1e-9;
      if (x[a] < 2 * eps || x[b] < 2 * eps) continue;
      Vector lo = x, hi = x;
      lo[a] -= eps; lo[b] += eps;
      hi[a] += eps; hi[b] -= eps;
      REQUIRE(std::abs(interpolate(vf, hi) - interpolate(vf, lo)) <= 1e-6);
    }
  }
}

TEST_CASE("nearest-neighbor mode returns node values") {
  const auto grid = build_grid(3, 0.2);
  SplitMix64 rng = make_stream(59, 0);
  ValueFunction vf{grid, Vector(grid->size())};
  for (Eigen::Index i = 0; i < grid->size(); ++i) vf.values[i] = rng.next_double();

  // exact at nodes, and always one of the stored values off-node
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    REQUIRE(interpolate(vf, grid->point(i), InterpMode::Nearest) == vf.values[i]);
  }
  for (int it = 0; it < 300; ++it) {
    const double v = interpolate(vf, random_weights(rng, 3), InterpMode::Nearest);
    bool is_node_value = false;
    for (Eigen::Index i = 0; i < grid->size(); ++i) {
      if (v == vf.values[i]) {
        is_node_value = true;
        break;
      }
    }
    REQUIRE(is_node_value);
  }
}

TEST_CASE("snap_to_simplex repairs harmless drift only") {
  Vector w(3);
  w << 0.5, 0.5, -5e-13;
  const Vector fixed = snap_to_simplex(w);
  CHECK(fixed[2] == 0.0);
  CHECK(fixed.sum() == doctest::Approx(1.0).epsilon(1e-15));

  Vector bad(3);
  bad << 0.6, 0.5, -0.1;
  CHECK_THROWS_AS(snap_to_simplex(bad), ValidationError);
}
