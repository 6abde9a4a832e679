#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "divform/affiliation.hpp"

using namespace divform;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("phase sweep of the flat resolvent vanishes linearly in k") {
  Grid g = Grid::line(-20.0, 20.0, 160, true);
  auto op = assemble(CoefficientProfile::uniform(1.0), g, Boundary::Periodic);
  Eigen::MatrixXcd R = resolvent(op, 1.0).cast<std::complex<double>>();
  const double base = 2.0 * kPi / 40.0;  // dual-lattice spacing
  auto sweep = vk_sweep(R, g, {0.0, base, 2.0 * base, 4.0 * base, 8.0 * base});
  CHECK(sweep.samples[0].second == 0.0);
  double prev = 0.0;
  for (auto [k, norm] : sweep.samples) {
    CHECK(norm <= 1.5 * k + 0.05);
    CHECK(norm >= prev - 1e-9);  // monotone in |k| on this family
    prev = norm;
  }
  // Off-lattice frequencies snap to the nearest nonzero dual-lattice point.
  auto snapped = vk_sweep(R, g, {0.05});
  CHECK(snapped.samples[0].first == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("translation sweep of the flat resolvent is small") {
  Grid g = Grid::line(-20.0, 20.0, 160, true);
  auto op = assemble(CoefficientProfile::uniform(1.0), g, Boundary::Periodic);
  Eigen::MatrixXcd R = sqrt_resolvent(op.matrix).cast<std::complex<double>>();
  auto sweep = us_sweep(R, g, {0.25, 0.5, 1.0});
  for (auto [s, norm] : sweep.samples) CHECK(norm <= 1.5 * s + 0.05);
  Grid bad = Grid::line(0.0, 1.0, 16);
  CHECK_THROWS_AS(us_sweep(R, bad, {0.5}), std::invalid_argument);
}

TEST_CASE("uniformity study: degenerate bump grows toward the ceiling 2") {
  auto tab = uniformity_study(CoefficientProfile::rational_bump(), 1.0,
                              {10.0, 20.0, 40.0, 80.0});
  REQUIRE(tab.rows.size() == 4);
  CHECK(tab.monotone_nondecreasing);
  CHECK(tab.rows.back().norm_sqrt > 1.0);
  CHECK(tab.sup_norm <= 2.0 + 1e-9);  // never beats ||U_s - I||
  // The plain resolvent suppresses the failure mode far less sharply than
  // the square root does not: both are recorded for comparison.
  for (const auto& r : tab.rows) CHECK(r.norm_plain >= 0.0);
}

TEST_CASE("uniformity study: flat coefficient is L-independent") {
  auto tab = uniformity_study(CoefficientProfile::uniform(1.0), 1.0,
                              {10.0, 20.0, 40.0, 80.0});
  double lo = 1e300, hi = 0.0;
  for (const auto& r : tab.rows) {
    lo = std::min(lo, r.norm_sqrt);
    hi = std::max(hi, r.norm_sqrt);
  }
  CHECK((hi - lo) / hi < 0.10);
}

TEST_CASE("classifier separates the flat operator from the decaying bump") {
  ClassifyConfig cfg;
  cfg.half_widths = {10.0, 20.0, 40.0};
  auto flat = classify(CoefficientProfile::uniform(1.0), cfg);
  CHECK(flat.verdict == Verdict::E_affiliated);

  cfg.half_widths = {10.0, 20.0, 40.0, 80.0};
  auto bump = classify(CoefficientProfile::rational_bump(), cfg);
  CHECK(bump.verdict == Verdict::D_only);
  CHECK(bump.v_sweep_uniform);
  CHECK_FALSE(bump.u_sweep_uniform);
}

TEST_CASE("form commutator sweep fits a linear-plus-quadratic law in k") {
  Grid g = Grid::line(-10.0, 10.0, 160, true);
  const double base = 2.0 * kPi / 20.0;
  auto sweep = form_commutator_sweep(CoefficientProfile::uniform(1.0), g,
                                     {base, 2.0 * base, 3.0 * base, 4.0 * base});
  auto fit = fit_linear_quadratic(sweep);
  CHECK(fit.rel_residual < 0.1);
  CHECK(fit.c1 >= 0.0);
  CHECK(fit.c2 >= 0.0);
  double prev = 0.0;
  for (auto [k, norm] : sweep.samples) {
    CHECK(norm <= 2.0 * k + 1.5 * k * k + 0.05);
    CHECK(norm >= prev - 1e-9);
    prev = norm;
  }
}

TEST_CASE("regularizer succeeds on a resolvent and fails on the identity") {
  Grid g = Grid::line(-kPi, kPi, 512, true);
  auto op = assemble(CoefficientProfile::uniform(1.0), g, Boundary::Periodic);
  Eigen::MatrixXcd R = resolvent(op, 1.0).cast<std::complex<double>>();

  auto reg = build_regularizer(R, g, 12);
  CHECK(reg.success);
  REQUIRE(reg.certified_norms.size() == 12);
  for (double nrm : reg.certified_norms) CHECK(nrm < 2.0);
  for (size_t m = 0; m < reg.f_tables.size(); ++m)
    for (double f : reg.f_tables[m]) {
      CHECK(f >= 1.0 - 1e-12);
      CHECK(f <= m + 2.0 + 1e-12);  // f_M <= M+1 with M = m+1
    }
  for (size_t n = 0; n < reg.times.size(); ++n) {
    CHECK(reg.times[n] <= std::pow(2.0, -double(n + 1)) + 1e-15);
    CHECK(reg.partial_norms[n] <= std::pow(2.0, -double(n + 1)) * (1 + 1e-6));
  }

  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(512, 512);
  auto fail = build_regularizer(I, g, 12);
  CHECK_FALSE(fail.success);
  CHECK(fail.failed_at >= 1);
  CHECK(fail.failed_at <= 12);
}

TEST_CASE("band decomposition reconstructs exactly with certified band norms") {
  Grid g = Grid::line(-8.0, 8.0, 128);
  auto op = assemble(CoefficientProfile::uniform(1.0), g);
  Eigen::MatrixXd A = heat(op, 0.5);
  auto part = CubePartition::unit_cubes(g);
  auto bd = band_decompose(A, part);
  CHECK(bd.reconstruction_error <= 1e-12 * svd_norm(A));
  REQUIRE(bd.offsets.size() == bd.band_norms.size());
  for (size_t i = 0; i < bd.offsets.size(); ++i)
    CHECK(bd.band_norms[i] <= bd.mu[i] + 1e-12);
}

TEST_CASE("bounded-support times finite-range stays within radius r+s") {
  Grid g = Grid::line(-16.0, 16.0, 128);
  const int n = 128;
  std::mt19937_64 rng(31415);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 5; ++trial) {
    double r = 3.0 + trial, s = 1.5;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double xi = g.node(0, i), xj = g.node(0, j);
        if (std::abs(xi) <= r && std::abs(xj) <= r) A(i, j) = gauss(rng);
        if (std::abs(xi - xj) <= s) B(i, j) = gauss(rng);
      }
    auto audit = ideal_ops(A, r, B, s, g);
    CHECK(audit.precondition_ok);
    CHECK(audit.support_ab <= audit.bound + 1e-12);
    CHECK(audit.support_ba <= audit.bound + 1e-12);
    CHECK(audit.norm_a_minus_i >= 1.0 - 1e-9);
  }
  // Violated precondition is witnessed.
  Eigen::MatrixXd full = Eigen::MatrixXd::Ones(n, n);
  CHECK_THROWS_AS(ideal_ops(full, 1.0, full, 1.0, g), std::invalid_argument);
}

TEST_CASE("conjugation norms are translation invariant to machine precision") {
  Grid g = Grid::line(-16.0, 16.0, 128, true);
  const int n = 128;
  const double h = g.spacing();
  const double L = 32.0;
  std::mt19937_64 rng(2718);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXcd S(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) S(i, j) = {gauss(rng), gauss(rng)};
    double k = 2.0 * kPi * (1 + trial % 5) / L;  // grid-compatible frequency
    double x = h * (3 + trial);                  // integer-cell shift
    Eigen::MatrixXcd U = translation(g, x);
    Eigen::MatrixXcd Sx = U * S * U.adjoint();
    Eigen::VectorXcd v = phase_multiplier(g, k);
    auto conj = [&](const Eigen::MatrixXcd& M) {
      return Eigen::MatrixXcd(v.asDiagonal() * M * v.conjugate().asDiagonal() - M);
    };
    double n1 = svd_norm(conj(Sx));
    double n2 = svd_norm(conj(S));
    CHECK(std::abs(n1 - n2) <= 1e-12 * std::max(n1, 1.0));
  }
}
