#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "divform/discretize.hpp"
#include "divform/spectral.hpp"

namespace divform {

/// Tables realizing the change of variable s(x) = integral a^{-1/2},
/// sigma(s) = a(x(s))^{1/4}, V(s) = sigma''(s)/sigma(s).
struct LiouvilleTransform {
  std::vector<double> x, s, sigma, potential;  // aligned samples
  Interval x_window{};
  Interval s_range{};
  bool closed_form = false;

  std::function<double(double)> s_of_x;
  std::function<double(double)> x_of_s;
  std::function<double(double)> sigma_of_s;
  std::function<double(double)> v_of_s;
};

LiouvilleTransform transform(const CoefficientProfile& profile, Interval x_window,
                             int samples = 4096);

/// K = -d^2/ds^2 + diag(V) with Dirichlet boundary on grid_s.
DiscreteOperator schrodinger_operator(const LiouvilleTransform& tr, const Grid& grid_s);
DiscreteOperator schrodinger_operator(const std::function<double(double)>& V,
                                      const Grid& grid_s);

struct EquivalenceReport {
  std::vector<double> x_eigs, s_eigs, rel_errors;
  double max_rel_error = 0.0;
  double isometry_max_defect = 0.0;
  int n = 0;
};

/// Eigenvalues of assemble(profile) on the x-window versus the
/// Liouville-transformed Schroedinger operator on the mapped s-window,
/// plus the isometry check on sampled functions.
EquivalenceReport verify_equivalence(const CoefficientProfile& profile,
                                     Interval x_window, int n, int count = 5);

}  // namespace divform
