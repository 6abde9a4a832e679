#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "divform/discretize.hpp"
#include "divform/metric.hpp"
#include "divform/spectral.hpp"

namespace divform {

struct SweepResult {
  std::string parameter;                        // "k" or "s"
  std::vector<std::pair<double, double>> samples;  // (value, operator norm)
  double half_width = 0.0;                      // L context
  int grid_points = 0;
  std::string profile_tag;
};

/// Per k: ||V_k A V_{-k} - A|| with V_k = diag(e^{ikx}).
SweepResult vk_sweep(const Eigen::MatrixXcd& A, const Grid& grid,
                     const std::vector<double>& ks);

/// Per s: ||U_s A - A|| on a periodic grid.
SweepResult us_sweep(const Eigen::MatrixXcd& A, const Grid& grid,
                     const std::vector<double>& ss);

enum class WindowMode {
  Symmetric,     // (-L, L)
  ShiftPositive  // (0, 2L): scans the +infinity direction
};

struct UniformityRow {
  double L = 0.0;
  int n = 0;
  double norm_sqrt = 0.0;   // ||(U_s - I)(H^{1/2}+I)^{-1}||
  double norm_plain = 0.0;  // ||(U_s - I)(H+I)^{-1}|| for comparison
};

struct UniformityTable {
  double s = 0.0;
  std::vector<UniformityRow> rows;
  bool monotone_nondecreasing = true;
  double sup_norm = 0.0;
};

/// For each L, assemble periodically on the window, form the square-root
/// resolvent by eigendecomposition and record ||(U_s - I) R_L||.
UniformityTable uniformity_study(const CoefficientProfile& profile, double s,
                                 const std::vector<double>& half_widths,
                                 double target_spacing = 0.25,
                                 WindowMode mode = WindowMode::Symmetric);

enum class Verdict { E_affiliated, D_only, Inconclusive };
std::string to_string(Verdict v);

struct ClassifyConfig {
  std::vector<double> k_list{0.05, 0.1, 0.2, 0.4};
  std::vector<double> s_list{0.25, 0.5, 1.0};
  std::vector<double> half_widths{10, 20, 40, 80};
  double target_spacing = 0.25;
  WindowMode mode = WindowMode::Symmetric;
  // Envelope for "uniformly small": norm(param) <= env_coef*|param|+env_offset.
  double env_coef = 1.5;
  double env_offset = 0.05;
  double theta_fail = 1.0;
};

struct AffiliationVerdict {
  Verdict verdict = Verdict::Inconclusive;
  bool v_sweep_uniform = false;
  bool u_sweep_uniform = false;
  double u_sweep_sup = 0.0;    // max over (s, L)
  double v_sweep_sup = 0.0;
  ClassifyConfig thresholds;
  std::vector<SweepResult> v_sweeps, u_sweeps;  // per L
};

AffiliationVerdict classify(const CoefficientProfile& profile,
                            const ClassifyConfig& cfg);

/// ||(H+I)^{-1/2} (L_k - L) (H+I)^{-1/2}|| where L_k = V_k L V_{-k}.
SweepResult form_commutator_sweep(const CoefficientProfile& profile, const Grid& grid,
                                  const std::vector<double>& ks);

struct QuadraticFit {
  double c1 = 0.0, c2 = 0.0;  // model c1|k| + c2|k|^2
  double rel_residual = 0.0;
};
QuadraticFit fit_linear_quadratic(const SweepResult& sweep);

struct Regularizer {
  bool success = false;
  int failed_at = -1;                   // first n with no admissible t_n
  std::vector<double> times;            // chosen t_n
  std::vector<double> partial_norms;    // ||(I-h_{t_n}(P)) A||
  std::vector<double> frequencies;      // k_j
  std::vector<std::vector<double>> f_tables;  // f_M(k_j) per M
  std::vector<double> certified_norms;  // ||f_M(P) A|| per M
};

/// Greedy construction of f_M = 1 + sum_{n<=M} (1 - h_{t_n}) with
/// t_n <= 2^{-n} and ||(I - h_{t_n}(P)) A|| <= 2^{-n}; the search window is
/// t in [t_min, 1] so failure is reportable on a finite frequency grid.
Regularizer build_regularizer(const Eigen::MatrixXcd& A, const Grid& grid, int budget,
                              double t_min = 1e-8);

struct BandDecomposition {
  CubePartition partition;
  std::vector<int> offsets;              // band index r
  std::vector<Eigen::MatrixXd> bands;    // B_r
  std::vector<double> band_norms;        // ||B_r||
  std::vector<double> mu;                // max block norm per r
  double reconstruction_error = 0.0;     // ||sum B_r - A||
};

BandDecomposition band_decompose(const Eigen::MatrixXd& A, const CubePartition& part);

struct SupportAudit {
  bool precondition_ok = true;
  std::string witness;
  double support_ab = 0.0, support_ba = 0.0;  // measured radii
  double bound = 0.0;                          // r + s
  double norm_a_minus_i = 0.0;
};

/// Verifies that products of a bounded-support A (radius r about the grid
/// center) with a finite-range B (range s) have support radius <= r+s.
SupportAudit ideal_ops(const Eigen::MatrixXd& A, double r, const Eigen::MatrixXd& B,
                       double s, const Grid& grid);

}  // namespace divform
