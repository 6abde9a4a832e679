#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace divform {

/// Finite weighted graph (X, mu, d): vertex measure mu > 0, positive edge
/// lengths inducing the shortest-path metric, and edge weights defining the
/// Dirichlet form  Q(f) = sum_edges w_uv (f(u) - f(v))^2.
/// The generator L_mu f(x) = mu(x)^{-1} sum_y w_xy (f(x) - f(y)) is realized
/// through its symmetrization S = M^{-1/2} W M^{-1/2}; the heat kernel is
/// h_t(x,y) = (e^{-tS})_{xy} / sqrt(mu_x mu_y).
class WeightedGraph {
 public:
  struct Edge {
    int u = 0, v = 0;
    double length = 1.0;
    double weight = 1.0;
  };

  static WeightedGraph build(int n, std::vector<double> mu, std::vector<Edge> edges,
                             std::vector<bool> boundary = {});
  static WeightedGraph path(int n, double mu = 1.0, double length = 1.0,
                            double weight = 1.0);
  static WeightedGraph lattice2d(int nx, int ny,
                                 const std::function<double(int, int)>& mu = {});

  int size() const { return n_; }
  const std::vector<double>& mu() const { return mu_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool is_boundary(int v) const { return boundary_[v]; }

  /// Symmetrized generator S (dense, PSD).
  const Eigen::MatrixXd& generator() const { return S_; }

  double distance(int x, int y) const;
  const std::vector<double>& distances_from(int src) const;  // cached Dijkstra
  std::vector<int> ball(int x, double r) const;              // d(x,.) <= r
  double volume(int x, double r) const;                      // mu(B_x(r))
  double diameter() const;

  Eigen::MatrixXd heat_operator(double t) const;  // e^{-tS}
  Eigen::MatrixXd heat_kernel(double t) const;    // h_t(x,y)

  /// Interior vertices: every member of B_x(reach) is non-boundary.
  std::vector<int> interior_centers(double reach) const;

 private:
  WeightedGraph() = default;

  int n_ = 0;
  std::vector<double> mu_;
  std::vector<Edge> edges_;
  std::vector<bool> boundary_;
  std::vector<std::vector<std::pair<int, double>>> adj_;  // (neighbor, length)
  Eigen::MatrixXd S_;

  // Uniform-lattice fast paths: Manhattan distances and a Kronecker-factored
  // heat operator e^{-tS} = e^{-tSx} (x) e^{-tSy}.
  bool uniform_lattice_ = false;
  int nx_ = 0, ny_ = 0;
  std::shared_ptr<WeightedGraph> factor_x_, factor_y_;

  mutable std::vector<std::vector<double>> dist_cache_;
};

struct ConstantEstimate {
  double value = 0.0;
  int samples = 0;
  bool inconclusive = false;
  std::vector<std::string> notes;
};

/// D = max over interior centers and listed radii of V_x(2r)/V_x(r);
/// boundary-affected balls are excluded rather than corrected.
ConstantEstimate doubling_constant(const WeightedGraph& g,
                                   const std::vector<double>& radii,
                                   int max_centers = 64);

/// Smallest P with  sum_{B_x(r)} mu |f - mean_{B_x(r)} f|^2
///                    <= P r^2 sum_{edges in B_x(2r)} w |grad f|^2
/// via the variational quotient (generalized eigenproblem per ball);
/// reported value is the max over samples.
ConstantEstimate poincare_constant(const WeightedGraph& g,
                                   const std::vector<double>& radii,
                                   int max_centers = 24);

struct KernelAudit {
  double t = 0.0;
  double C = 0.0;
  double exponent = 0.0;  // Gaussian rate a, or Hoelder order alpha
  double r2 = 0.0;        // goodness of the log-space fit
  double max_ratio = 0.0; // sup of measured/bound with the certified C
  int pairs = 0;
  std::vector<std::string> violations;
};

/// Fit h_t(x,y) <= C V_x(sqrt t)^{-1} e^{-a d(x,y)^2 / t}: least squares for
/// a over pairs above the noise floor 1e-12, then C certified as the sup, so
/// the audit passes with empty violations iff the fitted a is admissible.
KernelAudit gaussian_fit(const WeightedGraph& g, double t, int max_centers = 24);

/// Fit |h_t(x,y) - h_t(x,z)| <= C t^{-alpha/2} d(y,z)^alpha h_{2t}(x,y) over
/// pairs with 0 < d(y,z) <= sqrt(t); alpha clamped to (0,1].
KernelAudit holder_audit(const WeightedGraph& g, double t, int max_centers = 16,
                         int max_pairs = 20000);

struct TruncationFit {
  std::vector<double> radii;
  std::vector<double> errors;        // ||e^{-S} - Op(k_r)||
  std::vector<double> schur_bounds;  // max_x sum_{d>=r} h(x,y) mu(y)
  double K = 0.0;
  double a = 0.0;
  double r2 = 0.0;
};

/// Kernel truncation k_r(x,y) = h_1(x,y) theta_r(d(x,y)) with theta_r
/// piecewise linear (1 on [0,r], 0 beyond r+1); fits
/// log error = log K - a r^2 / 2.
TruncationFit truncation_error(const WeightedGraph& g,
                               const std::vector<double>& radii);

}  // namespace divform
