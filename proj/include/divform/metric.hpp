#pragma once

#include <Eigen/Dense>
#include <vector>

#include "divform/discretize.hpp"

namespace divform {

/// Distance oracle for the coefficient-induced metric ds = a^{-1/2} dx.
/// Closed1D keeps a cumulative-integral table s(x); GraphND runs shortest
/// paths on a weighted grid graph (8-neighbor stencil in 2D).
class MetricField {
 public:
  static MetricField closed_1d(const CoefficientProfile& profile, Interval window,
                               int resolution = 200000);
  static MetricField graph_nd(const CoefficientProfile& profile, const Grid& grid);

  double distance(double x, double y) const;                      // 1D
  double distance(std::array<double, 2> x, std::array<double, 2> y) const;  // graph
  double set_distance(const std::vector<double>& E, const std::vector<double>& F) const;

  // s(x) = integral_0^x a^{-1/2}; arbitrary additive normalization.
  double s_of_x(double x) const;
  Interval window() const { return window_; }

 private:
  MetricField() = default;
  bool graph_mode_ = false;
  Interval window_{};
  // Closed1D
  std::vector<double> xs_, ss_;
  // GraphND
  Grid grid_{};
  std::vector<std::vector<std::pair<int, double>>> adj_;
  int nearest_node(std::array<double, 2> p) const;
  mutable std::vector<double> dist_cache_;
  mutable int dist_cache_src_ = -1;
};

/// Unit cubes centered at integer lattice points, intersected with the grid.
struct CubePartition {
  std::vector<int> centers;                 // 1D cube centers n
  std::vector<std::vector<int>> members;    // grid node indices per cube
  static CubePartition unit_cubes(const Grid& grid);
};

struct HeatBoundRow {
  int e_id, f_id;
  double t, measured, bound, ratio;
  bool pass;
};

struct HeatBoundReport {
  std::vector<HeatBoundRow> rows;
  int violations = 0;
  double slack = 0.05;
};

/// Audits ||P_E e^{-Ht} P_F|| <= e^{-d(E,F)^2/4t} with slack (1+eps_disc).
/// Pairs are given as index sets into the grid nodes.
HeatBoundReport verify_heat_bound(const DiscreteOperator& op, const MetricField& metric,
                                  const std::vector<std::pair<Interval, Interval>>& pairs,
                                  const std::vector<double>& ts, double slack = 0.05);

struct BlockDecayTable {
  std::vector<int> r;
  std::vector<double> mu;
  double fitted_c = 0.0, fitted_k = 0.0, r2 = 0.0;
  double t = 0.0;
};

/// mu(r) = max over n-m=r of ||P_m e^{-Ht} P_n||, with a Gaussian-tail fit
/// log mu = -(|r|-k)^2 / (4 c t).
BlockDecayTable block_heat_decay(const DiscreteOperator& op,
                                 const CubePartition& partition, double t);

std::vector<int> nodes_in(const Grid& grid, Interval iv);

}  // namespace divform
