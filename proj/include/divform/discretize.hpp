#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "divform/coefficients.hpp"

namespace divform {

enum class Boundary { Dirichlet, Neumann, Periodic };

std::string to_string(Boundary b);

/// Truncated uniform grid. Dirichlet/Neumann grids hold interior points
/// x_j = lower + (j+1)h with h = (upper-lower)/(n+1); periodic grids hold
/// x_j = lower + j h with h = (upper-lower)/n and no boundary offset.
struct Grid {
  int dim = 1;
  std::array<double, 2> lower{0.0, 0.0};
  std::array<double, 2> upper{0.0, 0.0};
  std::array<int, 2> npts{0, 1};
  bool periodic = false;

  static Grid line(double lo, double hi, int n, bool periodic = false);
  static Grid box(double xlo, double xhi, int nx, double ylo, double yhi, int ny,
                  bool periodic = false);

  double spacing(int axis = 0) const;
  double node(int axis, int j) const;
  std::vector<double> nodes(int axis = 0) const;
  int size() const { return dim == 1 ? npts[0] : npts[0] * npts[1]; }
  // Flattened node coordinates; in 2D index = i*ny + j.
  std::vector<std::array<double, 2>> points() const;
  void validate() const;
};

struct DiscreteOperator {
  Grid grid;
  Eigen::MatrixXd matrix;
  Boundary boundary = Boundary::Dirichlet;
  std::string profile_tag;
  std::vector<std::string> warnings;
};

/// Symmetric finite-difference realization of the form
/// Q(f) = sum over cells of grad_h(f)^T a(midpoint) grad_h(f).
/// In 1D this is the classic midpoint-coefficient stencil
///   (Hf)_j = -[a_{j+1/2}(f_{j+1}-f_j) - a_{j-1/2}(f_j-f_{j-1})]/h^2.
DiscreteOperator assemble(const CoefficientProfile& profile, const Grid& grid,
                          Boundary boundary = Boundary::Dirichlet);

/// Diagonal of the position multiplier phi(Q) on the grid nodes.
Eigen::VectorXcd position_multiplier(const Grid& grid,
                                     const std::function<std::complex<double>(double)>& phi);
Eigen::VectorXd position_multiplier_real(const Grid& grid,
                                         const std::function<double(double)>& phi);

/// V_k = diag(e^{i k x_j}).
Eigen::VectorXcd phase_multiplier(const Grid& grid, double k);

/// Discrete frequencies k_m = 2 pi m / (upper-lower), m = -n/2 .. n/2-1.
std::vector<double> fourier_frequencies(const Grid& grid);

/// F* diag(g(k_j)) F on a periodic 1D grid; unitary when |g| == 1.
Eigen::MatrixXcd fourier_multiplier(const Grid& grid,
                                    const std::function<std::complex<double>(double)>& g);

/// Translation U_s f(x) = f(x+s). Exact cyclic permutation when s/h is an
/// integer, Fourier phase multiplier otherwise. Periodic grids only.
Eigen::MatrixXcd translation(const Grid& grid, double s);
bool translation_is_integer_shift(const Grid& grid, double s);

/// Plain-text (row, col, value) triplet export of the nonzero entries.
void export_triplets(const DiscreteOperator& op, const std::string& path);

}  // namespace divform
