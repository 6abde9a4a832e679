#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "divform/asymptotic.hpp"

using namespace divform;

TEST_CASE("union of two flat limit spectra fills the window above the floor") {
  AsymptoticFamily fam{CoefficientProfile::blend(1.0, 4.0),
                       {CoefficientProfile::uniform(1.0), CoefficientProfile::uniform(4.0)},
                       {"-inf", "+inf"}};
  auto est = union_spectrum(fam);
  REQUIRE(est.intervals.size() == 1);
  CHECK(est.intervals[0].lo == doctest::Approx(0.0));
  CHECK(est.intervals[0].hi == doctest::Approx(10.0));

  // Order and duplication of the limit list do not change the union.
  AsymptoticFamily fam2 = fam;
  std::swap(fam2.limits[0], fam2.limits[1]);
  fam2.limits.push_back(CoefficientProfile::uniform(1.0));
  fam2.directions.push_back("-inf");
  auto est2 = union_spectrum(fam2);
  CHECK(hausdorff_distance(est.intervals, est2.intervals) < 1e-12);
}

TEST_CASE("floquet bands match the direct estimate for a periodic field") {
  auto profile = CoefficientProfile::periodic(2.0, 1.0, 2.0 * 3.14159265358979323846);
  UnionSpectrumConfig ucfg;
  auto bands = floquet_bands(profile, ucfg);
  REQUIRE(!bands.empty());
  CHECK(bands.front().lo >= -1e-10);
  CHECK(bands.front().lo <= 1e-8);
  for (size_t i = 1; i < bands.size(); ++i) CHECK(bands[i].lo >= bands[i - 1].hi);

  EssentialSpectrumConfig ecfg;
  ecfg.half_widths = {20.0, 40.0, 80.0};
  auto direct = essential_spectrum_estimate(profile, ecfg);
  CHECK(hausdorff_distance(bands, direct.intervals) < 0.5);
}

TEST_CASE("blend field: essential spectrum agrees with the limit union") {
  auto base = CoefficientProfile::blend(1.0, 4.0);
  auto fam = AsymptoticFamily::from_builtin(base);
  REQUIRE(fam.limits.size() == 2);
  CompareConfig cfg;
  cfg.essential.half_widths = {10.0, 20.0, 40.0};
  auto cmp = compare_essential(base, fam, cfg);
  CHECK(cmp.agree);
  CHECK_FALSE(cmp.degenerate_limit);
  CHECK(cmp.hausdorff <= cmp.tol_h);
}

TEST_CASE("decaying bump: degenerate limit is flagged and disagrees") {
  auto base = CoefficientProfile::rational_bump();
  auto fam = AsymptoticFamily::from_builtin(base);
  CompareConfig cfg;
  cfg.essential.half_widths = {10.0, 20.0, 40.0};
  auto cmp = compare_essential(base, fam, cfg);
  CHECK(cmp.degenerate_limit);
  CHECK_FALSE(cmp.agree);
  CHECK_FALSE(cmp.note.empty());

  // Without the override the degenerate union refuses to evaluate.
  UnionSpectrumConfig ucfg;
  CHECK_THROWS_AS(union_spectrum(fam, ucfg), std::domain_error);
  ucfg.allow_degenerate = true;
  auto est = union_spectrum(fam, ucfg);
  REQUIRE(est.intervals.size() == 1);
  CHECK(est.intervals[0].lo == doctest::Approx(0.0));
  CHECK(est.intervals[0].hi == doctest::Approx(0.0));
}

TEST_CASE("multiplier with a vanishing tail: translates die, spectrum persists") {
  auto phi = [](double x) { return 1.0 / (1.0 + x * x); };
  Grid sup_grid = Grid::line(-10.0, 10.0, 10);
  std::vector<Grid> spec_grids{Grid::line(-10.0, 10.0, 80),
                               Grid::line(-20.0, 20.0, 320),
                               Grid::line(-40.0, 40.0, 1280)};
  auto rep = c0_counterexample(phi, sup_grid, {0.0, 10.0, 20.0, 40.0}, spec_grids,
                               {{0.0, 1.0}});
  REQUIRE(rep.sup_table.size() == 4);
  // Sup norms of the translates decay like the tail of phi...
  for (size_t i = 1; i < rep.sup_table.size(); ++i)
    CHECK(rep.sup_table[i].second < rep.sup_table[i - 1].second);
  CHECK(rep.sup_table.front().second == doctest::Approx(phi(sup_grid.node(0, 4))));
  // ...while the sampled spectra converge to the full range closure [0,1].
  REQUIRE(rep.spectrum_convergence.size() == 3);
  CHECK(rep.spectrum_convergence.back().second <
        rep.spectrum_convergence.front().second);
  CHECK(rep.spectrum_convergence.back().second < 5e-3);

  // A compactly supported phi leaves only {0} behind.
  auto bump = [](double x) { return std::abs(x) <= 1.0 ? 1.0 - std::abs(x) : 0.0; };
  auto rep0 = c0_counterexample(bump, sup_grid, {0.0, 20.0}, spec_grids, {{0.0, 1.0}});
  CHECK(rep0.sup_table.back().second == 0.0);
}

TEST_CASE("spectrum at infinity ignores bounded-support perturbations") {
  Grid g = Grid::line(-30.0, 30.0, 480);
  const int n = g.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) A(j, j) = std::sin(g.node(0, j));
  auto inf = spectrum_at_infinity(A, g, {5.0, 10.0, 15.0});
  REQUIRE(inf.stable.intervals.size() >= 1);
  CHECK(inf.stable.intervals.front().lo == doctest::Approx(-1.0).epsilon(1e-2));
  CHECK(inf.stable.intervals.back().hi == doctest::Approx(1.0).epsilon(1e-2));

  // Add a rank-heavy block supported in |x| <= 4: the stable part is unmoved.
  Eigen::MatrixXd B = A;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(g.node(0, i)) <= 4.0 && std::abs(g.node(0, j)) <= 4.0)
        B(i, j) += 3.0 * std::cos(double(i - j));
  auto infB = spectrum_at_infinity(B, g, {5.0, 10.0, 15.0});
  CHECK(hausdorff_distance(inf.stable.intervals, infB.stable.intervals) < 1e-9);

  // A multiplier that dies at infinity leaves spectrum only near zero.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double x = g.node(0, j);
    C(j, j) = 1.0 / (1.0 + x * x);
  }
  auto infC = spectrum_at_infinity(C, g, {5.0, 10.0, 15.0});
  REQUIRE(infC.stable.intervals.size() >= 1);
  for (const auto& iv : infC.stable.intervals) {
    CHECK(iv.lo >= -1e-9);
    CHECK(iv.hi <= 0.05);
  }
}
