#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "divform/metric.hpp"
#include "divform/spectral.hpp"

using namespace divform;

TEST_CASE("closed-form 1D metric for constant coefficients") {
  auto m = MetricField::closed_1d(CoefficientProfile::uniform(4.0), {-10.0, 10.0});
  // ds = dx / sqrt(4): distances are half the Euclidean ones.
  CHECK(m.distance(0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m.distance(-3.0, 3.0) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(m.distance(1.0, 1.0) == 0.0);
}

TEST_CASE("exponential coefficient gives the exponential arc length") {
  // a = e^{-2x}: s(x) = e^x up to a constant, so d(x,y) = |e^x - e^y|.
  auto m = MetricField::closed_1d(CoefficientProfile::exp_decay(2.0), {-5.0, 2.0});
  CHECK(m.distance(0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-6));
  CHECK(m.distance(-4.0, -2.0) ==
        doctest::Approx(std::exp(-2.0) - std::exp(-4.0)).epsilon(1e-6));
}

TEST_CASE("metric dominates the Euclidean lower bound d >= |x-y|/sqrt(sup a)") {
  auto prof = CoefficientProfile::periodic(2.0, 1.0, 3.0);
  Interval w{-8.0, 8.0};
  auto m = MetricField::closed_1d(prof, w);
  double c = prof.ellipticity_bounds(w).upper;
  for (double x = -7.0; x < 7.0; x += 0.9)
    for (double y = x + 0.5; y < 7.5; y += 1.1)
      CHECK(m.distance(x, y) >= std::abs(x - y) / std::sqrt(c) - 1e-9);
}

TEST_CASE("set distance is the min over representatives") {
  auto m = MetricField::closed_1d(CoefficientProfile::uniform(1.0), {-10.0, 10.0});
  CHECK(m.set_distance({-2.0, -1.0}, {1.0, 3.0}) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_THROWS_AS(m.set_distance({}, {1.0}), std::invalid_argument);
}

TEST_CASE("graph metric in 2D approximates the flat metric") {
  Grid g = Grid::box(0.0, 10.0, 40, 0.0, 10.0, 40);
  auto m = MetricField::graph_nd(CoefficientProfile::uniform(1.0), g);
  double d_axis = m.distance({1.0, 1.0}, {6.0, 1.0});
  CHECK(d_axis == doctest::Approx(5.0).epsilon(0.02));
  double d_diag = m.distance({1.0, 1.0}, {5.0, 5.0});
  // 8-neighbor shortest paths overestimate Euclidean by at most ~8%; query
  // points snap to the nearest grid node (spacing ~0.24), hence the slack.
  CHECK(d_diag >= 0.95 * std::hypot(4.0, 4.0));
  CHECK(d_diag <= 1.09 * std::hypot(4.0, 4.0));
}

TEST_CASE("unit cube partition covers the grid exactly once") {
  Grid g = Grid::line(-6.3, 6.3, 101);
  auto part = CubePartition::unit_cubes(g);
  std::vector<int> seen(101, 0);
  for (size_t c = 0; c < part.centers.size(); ++c)
    for (int j : part.members[c]) {
      ++seen[j];
      double x = g.node(0, j);
      CHECK(x >= part.centers[c] - 0.5);
      CHECK(x < part.centers[c] + 0.5);
    }
  for (int s : seen) CHECK(s == 1);
}

TEST_CASE("heat bound audit passes for the flat operator") {
  Grid g = Grid::line(-12.0, 12.0, 192);
  auto op = assemble(CoefficientProfile::uniform(1.0), g);
  auto m = MetricField::closed_1d(CoefficientProfile::uniform(1.0), {-12.0, 12.0});
  std::vector<std::pair<Interval, Interval>> pairs = {
      {{-8.0, -6.0}, {2.0, 4.0}},
      {{-2.0, -1.0}, {1.0, 2.0}},
      {{-10.0, -9.0}, {9.0, 10.0}},
      {{0.0, 0.5}, {3.0, 3.5}},
  };
  auto rep = verify_heat_bound(op, m, pairs, {0.1, 0.5, 1.0});
  CHECK(rep.violations == 0);
  CHECK(rep.rows.size() == 12);
  for (const auto& r : rep.rows) CHECK(r.measured <= r.bound * 1.05 + 1e-11);
}

TEST_CASE("block heat decay: Gaussian tail with a quadratic log fit") {
  Grid g = Grid::line(-16.0, 16.0, 256);
  auto op = assemble(CoefficientProfile::uniform(1.0), g);
  auto part = CubePartition::unit_cubes(g);
  auto tab = block_heat_decay(op, part, 0.5);
  REQUIRE(tab.r.size() > 10);
  CHECK(tab.r2 >= 0.95);
  CHECK(tab.fitted_c > 0.0);
  // The decay rate matches the coefficient scale sup a = 1 loosely.
  CHECK(tab.fitted_c < 5.0);
  // mu is symmetric in the offset and maximal on the diagonal.
  double mu0 = 0.0;
  for (size_t i = 0; i < tab.r.size(); ++i)
    if (tab.r[i] == 0) mu0 = tab.mu[i];
  for (double v : tab.mu) CHECK(v <= mu0 + 1e-12);
}
