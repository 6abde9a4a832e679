#pragma once

#include <Eigen/Dense>
#include <vector>

#include "divform/discretize.hpp"
#include "divform/intervals.hpp"

namespace divform {

struct SpectralData {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns (may be empty)
  Eigen::VectorXd residuals;     // ||H v - lambda v|| per pair
};

struct SpectralTolerances {
  double residual = 1e-8;       // residual <= residual*(1+|lambda|)
  double gram = 1e-8;           // ||V^T V - I||_max
  double cluster_gap_factor = 5.0;  // tol_L = factor * local mean spacing
  double heat_slack = 0.05;     // eps_disc for inequality audits
  double hausdorff = -1.0;      // <0: 3 * median spacing of finest grid
};

/// Lowest `count` eigenpairs. Dense up to dimension 8192; tridiagonal
/// matrices use Sturm bisection + inverse iteration; otherwise Lanczos.
SpectralData eigensolve(const Eigen::MatrixXd& M, int count,
                        bool want_vectors = true);
SpectralData eigensolve(const DiscreteOperator& op, int count,
                        bool want_vectors = true);

/// All eigenvalues (no vectors) of a symmetric matrix.
Eigen::VectorXd all_eigenvalues(const Eigen::MatrixXd& M);

/// (H + alpha I)^{-1}, alpha > 0.
Eigen::MatrixXd resolvent(const DiscreteOperator& op, double alpha);
Eigen::MatrixXd resolvent(const Eigen::MatrixXd& H, double alpha);

/// e^{-Ht} via dense eigendecomposition.
Eigen::MatrixXd heat(const DiscreteOperator& op, double t);
Eigen::MatrixXd heat(const Eigen::MatrixXd& H, double t);

/// (H^{1/2} + I)^{-1} via dense eigendecomposition; tiny negative
/// eigenvalues from roundoff are clamped to zero.
Eigen::MatrixXd sqrt_resolvent(const Eigen::MatrixXd& H);

/// Largest singular value by power iteration on M^T M (relative accuracy 1e-6).
double opnorm(const Eigen::MatrixXd& M);
double opnorm(const Eigen::MatrixXcd& M);

/// Largest singular value via full SVD (for machine-precision comparisons).
double svd_norm(const Eigen::MatrixXd& M);
double svd_norm(const Eigen::MatrixXcd& M);

struct EssentialSpectrumConfig {
  std::vector<double> half_widths;  // L-list, increasing, >= 3 entries
  double points_per_unit = 8.0;
  Interval window{0.0, 10.0};
  SpectralTolerances tol;
};

/// Boundary-condition-robust essential-spectrum estimator: eigenvalue
/// clusters stable under L-growth and present under both Dirichlet and
/// Neumann boundaries.
SpectrumEstimate essential_spectrum_estimate(const CoefficientProfile& profile,
                                             const EssentialSpectrumConfig& cfg);

}  // namespace divform
