#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "divform/spectral.hpp"

namespace divform {

/// A base coefficient field together with the limit profiles of its
/// translates. Limits are supplied analytically (built-in families) or
/// declared by the caller; finite windows cannot certify operator limits.
struct AsymptoticFamily {
  CoefficientProfile base;
  std::vector<CoefficientProfile> limits;
  std::vector<std::string> directions;

  static AsymptoticFamily from_builtin(const CoefficientProfile& base);
};

struct UnionSpectrumConfig {
  Interval window{0.0, 10.0};
  int bloch_samples = 64;       // quasimomentum resolution for periodic limits
  int points_per_period = 64;   // one-cell discretization for periodic limits
  bool allow_degenerate = false;
  EssentialSpectrumConfig fallback;  // used for limits with no analytic spectrum
};

/// Band intervals of a 1-D periodic operator by a Bloch-phase eigenvalue
/// sweep over one period, clipped to the window.
std::vector<Interval> floquet_bands(const CoefficientProfile& profile,
                                    const UnionSpectrumConfig& cfg);

/// Closed union of the limit-operator spectra within the window.
SpectrumEstimate union_spectrum(const AsymptoticFamily& family,
                                const UnionSpectrumConfig& cfg = {});

struct CompareConfig {
  EssentialSpectrumConfig essential;
  UnionSpectrumConfig unions;
  double tol_h = -1.0;  // <0: 3 x median eigenvalue spacing on the finest grid
};

struct EssentialComparison {
  SpectrumEstimate base_estimate;
  SpectrumEstimate union_estimate;
  double hausdorff = 0.0;
  double tol_h = 0.0;
  bool agree = false;
  bool degenerate_limit = false;
  std::string note;
};

/// Hausdorff comparison between the direct essential-spectrum estimate of
/// the base field and the union of its limit-operator spectra.
EssentialComparison compare_essential(const CoefficientProfile& base,
                                      const AsymptoticFamily& family,
                                      const CompareConfig& cfg);

struct C0Report {
  // (shift c, max_j |phi(x_j + c)|) on the sup grid.
  std::vector<std::pair<double, double>> sup_table;
  // (grid points n, Hausdorff distance of the clustered sample spectrum to
  // the target range) per spectrum grid, in the order given.
  std::vector<std::pair<int, double>> spectrum_convergence;
  SpectrumEstimate final_spectrum;  // clusters on the last spectrum grid
};

/// The position-multiplier counterexample: translates of phi(Q) converge
/// strongly to 0 while the spectrum fills the closure of the range of phi.
C0Report c0_counterexample(const std::function<double(double)>& phi,
                           const Grid& sup_grid, const std::vector<double>& shifts,
                           const std::vector<Grid>& spectrum_grids,
                           const std::vector<Interval>& target_range,
                           double gap_factor = 5.0);

struct InfinitySpectrum {
  std::vector<double> radii;
  std::vector<std::vector<Interval>> per_radius;
  SpectrumEstimate stable;
};

/// Quotient-spectrum approximation: the r-stable clusters of the compression
/// of A to the complement of the radius-r ball about the grid center.
InfinitySpectrum spectrum_at_infinity(const Eigen::MatrixXd& A, const Grid& grid,
                                      const std::vector<double>& radii,
                                      double gap_factor = 5.0, double widen = -1.0);

}  // namespace divform
