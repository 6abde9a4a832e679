#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "divform/graphmanifold.hpp"
#include "divform/spectral.hpp"

using namespace divform;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("path graph generator has the cosine spectrum of the free chain") {
  const int n = 24;
  auto g = WeightedGraph::path(n);
  Eigen::VectorXd evs = all_eigenvalues(g.generator());
  // Unit-weight path Laplacian: lambda_k = 2 - 2 cos(k pi / n), k = 0..n-1.
  for (int k = 0; k < n; ++k)
    CHECK(evs(k) == doctest::Approx(2.0 - 2.0 * std::cos(k * kPi / n)).epsilon(1e-10));
  CHECK(g.distance(0, n - 1) == doctest::Approx(double(n - 1)));
  CHECK(g.is_boundary(0));
  CHECK(g.is_boundary(n - 1));
  CHECK_FALSE(g.is_boundary(n / 2));
}

TEST_CASE("heat kernel is symmetric, mu-stochastic, and a semigroup") {
  auto g = WeightedGraph::build(
      5, {1.0, 2.0, 0.5, 1.5, 1.0},
      {{0, 1, 1.0, 1.0}, {1, 2, 2.0, 0.5}, {2, 3, 1.0, 2.0}, {3, 4, 1.0, 1.0}, {0, 4, 3.0, 0.25}});
  const double t = 0.7;
  Eigen::MatrixXd h = g.heat_kernel(t);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  for (int x = 0; x < 5; ++x) {
    double mass = 0.0;
    for (int y = 0; y < 5; ++y) mass += h(x, y) * g.mu()[y];
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
  Eigen::MatrixXd e1 = g.heat_operator(t), e2 = g.heat_operator(2.0 * t);
  CHECK((e1 * e1 - e2).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("factored heat operator on the uniform lattice matches dense") {
  auto g = WeightedGraph::lattice2d(8, 8);
  Eigen::MatrixXd fast = g.heat_operator(0.8);
  Eigen::MatrixXd dense = heat(g.generator(), 0.8);
  CHECK((fast - dense).cwiseAbs().maxCoeff() < 1e-10);
  // Manhattan metric on the unit lattice.
  CHECK(g.distance(0, 8 * 8 - 1) == doctest::Approx(14.0));
  CHECK(g.distance(0, 9) == doctest::Approx(2.0));
}

TEST_CASE("volume doubling: lattice is two-dimensional, path one-dimensional") {
  auto g2 = WeightedGraph::lattice2d(33, 33);
  auto d2 = doubling_constant(g2, {2.0, 4.0});
  CHECK_FALSE(d2.inconclusive);
  // Interior ball counts: |B(2)|/|B(1)| styles bracket 2^d for d = 2.
  CHECK(d2.value > 2.5);
  CHECK(d2.value < 4.5);

  auto g1 = WeightedGraph::path(65);
  auto d1 = doubling_constant(g1, {2.0, 4.0, 8.0});
  CHECK_FALSE(d1.inconclusive);
  CHECK(d1.value > 1.5);
  CHECK(d1.value < 2.1);

  // Exponentially growing vertex measure breaks polynomial doubling.
  auto gw = WeightedGraph::lattice2d(33, 33, [](int i, int) { return std::exp(0.8 * i); });
  auto dw = doubling_constant(gw, {2.0, 4.0});
  CHECK(dw.value > d2.value);
}

TEST_CASE("poincare constant is finite and stable across scales") {
  auto g = WeightedGraph::lattice2d(25, 25);
  auto p1 = poincare_constant(g, {2.0});
  auto p2 = poincare_constant(g, {4.0});
  CHECK_FALSE(p1.inconclusive);
  CHECK(p1.value > 0.0);
  CHECK(p2.value > 0.0);
  // Same scale-invariant constant up to a modest factor.
  CHECK(p2.value < 4.0 * p1.value);
  CHECK(p1.value < 4.0 * p2.value);
}

TEST_CASE("gaussian upper bound holds with the certified constant") {
  auto g = WeightedGraph::lattice2d(21, 21);
  auto audit = gaussian_fit(g, 1.5);
  CHECK(audit.violations.empty());
  CHECK(audit.exponent > 0.05);
  CHECK(audit.C > 0.0);
  CHECK(audit.max_ratio <= 1.0 + 1e-9);  // C is the certified sup
  CHECK(audit.max_ratio > 0.99);
  CHECK(audit.pairs > 100);
  CHECK(audit.r2 > 0.8);
}

TEST_CASE("hoelder continuity audit passes on the lattice") {
  auto g = WeightedGraph::lattice2d(21, 21);
  auto audit = holder_audit(g, 2.0);
  CHECK(audit.violations.empty());
  CHECK(audit.exponent > 0.0);
  CHECK(audit.exponent <= 1.0);
  CHECK(audit.max_ratio <= 1.0 + 1e-9);
  CHECK(audit.pairs > 0);
}

TEST_CASE("kernel truncation error decays like a gaussian in the radius") {
  auto g = WeightedGraph::lattice2d(17, 17);
  auto fit = truncation_error(g, {2.0, 3.0, 4.0, 5.0, 6.0});
  REQUIRE(fit.errors.size() == 5);
  for (size_t i = 0; i < fit.errors.size(); ++i) {
    if (i) CHECK(fit.errors[i] <= fit.errors[i - 1] + 1e-12);
    CHECK(fit.errors[i] <= fit.schur_bounds[i] + 1e-12);
  }
  CHECK(fit.a > 0.0);
  CHECK(fit.K > 0.0);
  CHECK(fit.r2 > 0.95);

  // Beyond the diameter nothing is truncated.
  auto full = truncation_error(g, {40.0});
  CHECK(full.errors[0] < 1e-12);
}
