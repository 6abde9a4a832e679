#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "divform/spectral.hpp"

using namespace divform;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Closed-form eigenvalues of the discrete Dirichlet Laplacian on (0, L)
// with n interior points: lambda_k = (4/h^2) sin^2(k pi / (2(n+1))).
double dirichlet_eig(double L, int n, int k) {
  double h = L / (n + 1);
  double s = std::sin(0.5 * k * kPi / (n + 1));
  return 4.0 * s * s / (h * h);
}
}  // namespace

TEST_CASE("dense eigensolve matches the closed-form discrete spectrum") {
  Grid g = Grid::line(0.0, kPi, 64);
  auto op = assemble(CoefficientProfile::uniform(1.0), g);
  auto data = eigensolve(op, 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(data.eigenvalues(k) ==
          doctest::Approx(dirichlet_eig(kPi, 64, k + 1)).epsilon(1e-10));
    CHECK(data.residuals(k) < 1e-8 * (1.0 + data.eigenvalues(k)));
  }
  // Orthonormality.
  Eigen::MatrixXd gram = data.eigenvectors.transpose() * data.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("tridiagonal bisection path agrees with the dense solver") {
  Grid g = Grid::line(0.0, 10.0, 1024);  // n > 512 routes to Sturm bisection
  auto op = assemble(CoefficientProfile::periodic(2.0, 1.0, 2.0 * kPi), g);
  auto fast = eigensolve(op, 6);
  Eigen::VectorXd dense = all_eigenvalues(op.matrix);
  for (int k = 0; k < 6; ++k) {
    CHECK(fast.eigenvalues(k) == doctest::Approx(dense(k)).epsilon(1e-9));
    CHECK(fast.residuals(k) < 1e-8 * (1.0 + fast.eigenvalues(k)));
  }
  for (int k = 0; k < 5; ++k)
    CHECK(fast.eigenvalues(k) <= fast.eigenvalues(k + 1) + 1e-12);
}

TEST_CASE("resolvent, heat, and sqrt-resolvent act as spectral functions") {
  Grid g = Grid::line(0.0, kPi, 48);
  auto op = assemble(CoefficientProfile::uniform(1.0), g);
  auto data = eigensolve(op, 3);
  Eigen::MatrixXd R = resolvent(op, 1.0);
  Eigen::MatrixXd E = heat(op, 0.3);
  Eigen::MatrixXd S = sqrt_resolvent(op.matrix);
  for (int k = 0; k < 3; ++k) {
    double lam = data.eigenvalues(k);
    Eigen::VectorXd v = data.eigenvectors.col(k);
    CHECK((R * v - v / (lam + 1.0)).norm() < 1e-10);
    CHECK((E * v - std::exp(-0.3 * lam) * v).norm() < 1e-10);
    CHECK((S * v - v / (std::sqrt(lam) + 1.0)).norm() < 1e-10);
  }
  // Semigroup property.
  CHECK((heat(op, 0.2) * heat(op, 0.3) - heat(op, 0.5)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(resolvent(op, -1.0), std::invalid_argument);
}

TEST_CASE("operator norms: power iteration tracks full SVD") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd M(40, 40);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j) M(i, j) = gauss(rng);
  CHECK(opnorm(M) == doctest::Approx(svd_norm(M)).epsilon(1e-5));
  Eigen::MatrixXcd Z = M.cast<std::complex<double>>() * std::complex<double>(0, 1);
  CHECK(opnorm(Z) == doctest::Approx(svd_norm(Z)).epsilon(1e-5));
  CHECK(svd_norm(Eigen::MatrixXd(Eigen::MatrixXd::Identity(7, 7))) ==
        doctest::Approx(1.0));
}

TEST_CASE("interval utilities") {
  auto merged = merge_intervals({{0.0, 1.0}, {0.5, 2.0}, {3.0, 4.0}});
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].hi == doctest::Approx(2.0));

  auto inter = intersect_intervals({{0.0, 2.0}}, {{1.0, 3.0}, {5.0, 6.0}});
  REQUIRE(inter.size() == 1);
  CHECK(inter[0].lo == doctest::Approx(1.0));
  CHECK(inter[0].hi == doctest::Approx(2.0));

  CHECK(hausdorff_distance({{0.0, 1.0}}, {{0.0, 1.0}}) == 0.0);
  CHECK(hausdorff_distance({{0.0, 1.0}}, {{0.0, 2.0}}) == doctest::Approx(1.0));
  // A gap in one union is probed from the other side.
  CHECK(hausdorff_distance({{0.0, 4.0}}, {{0.0, 1.0}, {3.0, 4.0}}) ==
        doctest::Approx(1.0));
  CHECK(std::isinf(hausdorff_distance({}, {{0.0, 1.0}})));

  auto clusters = cluster_intervals(
      {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 5.0, 5.1, 5.2, 5.3, 5.4}, 5.0);
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0].hi == doctest::Approx(0.5));
  CHECK(clusters[1].lo == doctest::Approx(5.0));
}

TEST_CASE("essential spectrum of the flat operator fills the window") {
  EssentialSpectrumConfig cfg;
  cfg.half_widths = {10.0, 20.0, 40.0};
  cfg.window = {0.0, 10.0};
  auto est = essential_spectrum_estimate(CoefficientProfile::uniform(1.0), cfg);
  REQUIRE_FALSE(est.intervals.empty());
  CHECK(hausdorff_distance(est.intervals, {{0.0, 10.0}}) < 0.5);
  // Evidence is recorded for every run.
  CHECK(est.evidence[0].size() == 6);  // 3 sizes x 2 boundary conditions
}
