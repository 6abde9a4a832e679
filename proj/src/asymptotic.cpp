#include "divform/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace divform {

AsymptoticFamily AsymptoticFamily::from_builtin(const CoefficientProfile& base) {
  AsymptoticFamily fam{base, base.asymptotic_profiles(), {}};
  if (base.kind() == ProfileKind::Blend) {
    fam.directions = {"-inf", "+inf"};
  } else {
    for (size_t i = 0; i < fam.limits.size(); ++i)
      fam.directions.push_back("+/-inf");
  }
  return fam;
}

std::vector<Interval> floquet_bands(const CoefficientProfile& profile,
                                    const UnionSpectrumConfig& cfg) {
  if (profile.kind() != ProfileKind::Periodic)
    throw std::invalid_argument("floquet_bands requires a periodic profile");
  const double T = profile.params()[2];
  const int n = cfg.points_per_period;
  const double h = T / n;
  Eigen::VectorXd mid(n);
  for (int j = 0; j < n; ++j) mid(j) = profile.evaluate((j + 0.5) * h);

  std::vector<Interval> bands(n, {std::numeric_limits<double>::infinity(),
                                  -std::numeric_limits<double>::infinity()});
  const std::complex<double> I{0.0, 1.0};
  for (int m = 0; m <= cfg.bloch_samples; ++m) {
    const double theta = M_PI * m / cfg.bloch_samples;  // bands are even in theta
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      const double al = mid((j + n - 1) % n), ar = mid(j);
      H(j, j) = (al + ar) / (h * h);
      if (j + 1 < n) {
        H(j, j + 1) = -ar / (h * h);
        H(j + 1, j) = -ar / (h * h);
      }
    }
    H(n - 1, 0) += -mid(n - 1) / (h * h) * std::exp(I * theta);
    H(0, n - 1) += -mid(n - 1) / (h * h) * std::exp(-I * theta);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H,
                                                       Eigen::EigenvaluesOnly);
    for (int b = 0; b < n; ++b) {
      bands[b].lo = std::min(bands[b].lo, es.eigenvalues()(b));
      bands[b].hi = std::max(bands[b].hi, es.eigenvalues()(b));
    }
  }
  std::vector<Interval> clipped;
  for (const auto& b : bands) {
    double lo = std::max(b.lo, cfg.window.lo);
    double hi = std::min(b.hi, cfg.window.hi);
    if (lo <= hi) clipped.push_back({lo, hi});
  }
  return merge_intervals(clipped);
}

SpectrumEstimate union_spectrum(const AsymptoticFamily& family,
                                const UnionSpectrumConfig& cfg) {
  std::vector<Interval> all;
  for (const auto& lim : family.limits) {
    if (lim.degenerate()) {
      if (!cfg.allow_degenerate)
        throw std::domain_error(
            "degenerate limit profile (a == 0); pass allow_degenerate to treat "
            "it as the zero form with spectrum {0}");
      if (cfg.window.contains(0.0)) all.push_back({0.0, 0.0});
      continue;
    }
    switch (lim.kind()) {
      case ProfileKind::Uniform: {
        // sigma(-c Laplacian) = [0, inf)
        double lo = std::max(0.0, cfg.window.lo);
        if (lo <= cfg.window.hi) all.push_back({lo, cfg.window.hi});
        break;
      }
      case ProfileKind::Periodic: {
        auto bands = floquet_bands(lim, cfg);
        all.insert(all.end(), bands.begin(), bands.end());
        break;
      }
      default: {
        auto est = essential_spectrum_estimate(lim, cfg.fallback);
        for (auto iv : est.intervals) {
          iv.lo = std::max(iv.lo, cfg.window.lo);
          iv.hi = std::min(iv.hi, cfg.window.hi);
          if (iv.lo <= iv.hi) all.push_back(iv);
        }
        break;
      }
    }
  }
  SpectrumEstimate out;
  out.intervals = merge_intervals(all);
  out.evidence.resize(out.intervals.size());
  out.inconclusive.assign(out.intervals.size(), false);
  return out;
}

namespace {
// Median adjacent spacing of the base operator's eigenvalues inside the
// window on the finest configured domain.
double median_spacing(const CoefficientProfile& base,
                      const EssentialSpectrumConfig& cfg) {
  double L = *std::max_element(cfg.half_widths.begin(), cfg.half_widths.end());
  Interval dom = base.domain();
  double lo = std::max(-L, dom.lo + 0.05);
  double hi = std::min(L, dom.hi - 0.05);
  int n = std::max(16, static_cast<int>(std::lround((hi - lo) * cfg.points_per_unit)));
  auto op = assemble(base, Grid::line(lo, hi, n), Boundary::Dirichlet);
  Eigen::VectorXd ev = all_eigenvalues(op.matrix);
  std::vector<double> gaps;
  for (int i = 1; i < ev.size(); ++i)
    if (cfg.window.contains(ev(i)) && cfg.window.contains(ev(i - 1)))
      gaps.push_back(ev(i) - ev(i - 1));
  if (gaps.empty()) return 0.0;
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  return gaps[gaps.size() / 2];
}
}  // namespace

EssentialComparison compare_essential(const CoefficientProfile& base,
                                      const AsymptoticFamily& family,
                                      const CompareConfig& cfg) {
  if (base.degenerate())
    throw std::invalid_argument("compare_essential: base profile is degenerate");
  EssentialComparison rep;
  rep.base_estimate = essential_spectrum_estimate(base, cfg.essential);

  UnionSpectrumConfig ucfg = cfg.unions;
  for (const auto& lim : family.limits)
    if (lim.degenerate()) {
      rep.degenerate_limit = true;
      ucfg.allow_degenerate = true;
      rep.note =
          "a limit profile is degenerate (a -> 0); its operator is the zero "
          "form with spectrum {0}";
    }
  rep.union_estimate = union_spectrum(family, ucfg);

  rep.tol_h = cfg.tol_h > 0.0 ? cfg.tol_h : 3.0 * median_spacing(base, cfg.essential);
  rep.hausdorff =
      hausdorff_distance(rep.base_estimate.intervals, rep.union_estimate.intervals);
  rep.agree = std::isfinite(rep.hausdorff) && rep.hausdorff <= rep.tol_h;
  return rep;
}

C0Report c0_counterexample(const std::function<double(double)>& phi,
                           const Grid& sup_grid, const std::vector<double>& shifts,
                           const std::vector<Grid>& spectrum_grids,
                           const std::vector<Interval>& target_range,
                           double gap_factor) {
  C0Report rep;
  for (double c : shifts) {
    double sup = 0.0;
    for (double x : sup_grid.nodes()) sup = std::max(sup, std::abs(phi(x + c)));
    rep.sup_table.push_back({c, sup});
  }
  for (const auto& g : spectrum_grids) {
    std::vector<double> vals;
    for (double x : g.nodes()) vals.push_back(phi(x));
    std::sort(vals.begin(), vals.end());
    auto clusters = cluster_intervals(vals, gap_factor);
    rep.spectrum_convergence.push_back(
        {g.npts[0], hausdorff_distance(clusters, target_range)});
    if (&g == &spectrum_grids.back()) {
      rep.final_spectrum.intervals = clusters;
      rep.final_spectrum.evidence.resize(clusters.size());
      rep.final_spectrum.inconclusive.assign(clusters.size(), false);
    }
  }
  return rep;
}

InfinitySpectrum spectrum_at_infinity(const Eigen::MatrixXd& A, const Grid& grid,
                                      const std::vector<double>& radii,
                                      double gap_factor, double widen) {
  InfinitySpectrum out;
  out.radii = radii;
  const auto pts = grid.points();
  const double cx = 0.5 * (grid.lower[0] + grid.upper[0]);
  const double cy = 0.5 * (grid.lower[1] + grid.upper[1]);

  std::vector<double> spacings;
  for (double r : radii) {
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
      double d = grid.dim == 1 ? std::abs(pts[i][0] - cx)
                               : std::hypot(pts[i][0] - cx, pts[i][1] - cy);
      if (d > r) keep.push_back(i);
    }
    if (keep.empty()) {
      out.per_radius.push_back({});
      continue;
    }
    Eigen::MatrixXd sub(keep.size(), keep.size());
    for (size_t a = 0; a < keep.size(); ++a)
      for (size_t b = 0; b < keep.size(); ++b) sub(a, b) = A(keep[a], keep[b]);
    Eigen::VectorXd ev = all_eigenvalues(sub);
    std::vector<double> vals(ev.data(), ev.data() + ev.size());
    for (size_t i = 1; i < vals.size(); ++i)
      spacings.push_back(vals[i] - vals[i - 1]);
    out.per_radius.push_back(cluster_intervals(vals, gap_factor));
  }
  if (widen < 0.0) {
    widen = 1e-9;
    if (!spacings.empty()) {
      std::nth_element(spacings.begin(), spacings.begin() + spacings.size() / 2,
                       spacings.end());
      widen = std::max(widen, 3.0 * spacings[spacings.size() / 2]);
    }
  }

  std::vector<Interval> stable;
  bool first = true;
  for (const auto& set : out.per_radius) {
    if (set.empty()) continue;
    std::vector<Interval> widened;
    for (auto iv : set) widened.push_back({iv.lo - widen, iv.hi + widen});
    widened = merge_intervals(widened);
    stable = first ? widened : intersect_intervals(stable, widened);
    first = false;
  }
  out.stable.intervals = stable;
  out.stable.evidence.resize(stable.size());
  out.stable.inconclusive.assign(stable.size(), false);
  return out;
}

}  // namespace divform
