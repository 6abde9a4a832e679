#include "divform/discretize.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace divform {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr std::complex<double> kI{0.0, 1.0};
}  // namespace

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::Dirichlet: return "dirichlet";
    case Boundary::Neumann: return "neumann";
    case Boundary::Periodic: return "periodic";
  }
  return "?";
}

Grid Grid::line(double lo, double hi, int n, bool per) {
  Grid g;
  g.dim = 1;
  g.lower = {lo, 0.0};
  g.upper = {hi, 0.0};
  g.npts = {n, 1};
  g.periodic = per;
  g.validate();
  return g;
}

Grid Grid::box(double xlo, double xhi, int nx, double ylo, double yhi, int ny,
               bool per) {
  Grid g;
  g.dim = 2;
  g.lower = {xlo, ylo};
  g.upper = {xhi, yhi};
  g.npts = {nx, ny};
  g.periodic = per;
  g.validate();
  return g;
}

void Grid::validate() const {
  for (int ax = 0; ax < dim; ++ax) {
    if (npts[ax] < 8) throw std::invalid_argument("grid needs at least 8 points per axis");
    if (upper[ax] <= lower[ax]) throw std::invalid_argument("grid interval empty");
  }
}

double Grid::spacing(int axis) const {
  double len = upper[axis] - lower[axis];
  return periodic ? len / npts[axis] : len / (npts[axis] + 1);
}

double Grid::node(int axis, int j) const {
  return lower[axis] + spacing(axis) * (periodic ? j : j + 1);
}

std::vector<double> Grid::nodes(int axis) const {
  std::vector<double> xs(npts[axis]);
  for (int j = 0; j < npts[axis]; ++j) xs[j] = node(axis, j);
  return xs;
}

std::vector<std::array<double, 2>> Grid::points() const {
  std::vector<std::array<double, 2>> pts;
  if (dim == 1) {
    for (int j = 0; j < npts[0]; ++j) pts.push_back({node(0, j), 0.0});
  } else {
    for (int i = 0; i < npts[0]; ++i)
      for (int j = 0; j < npts[1]; ++j) pts.push_back({node(0, i), node(1, j)});
  }
  return pts;
}

namespace {

DiscreteOperator assemble_1d(const CoefficientProfile& prof, const Grid& grid,
                             Boundary bc) {
  const int n = grid.npts[0];
  const double h = grid.spacing(0);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  auto mid = [&](int j) {  // midpoint between node j and node j+1
    return grid.node(0, j) + 0.5 * h;
  };

  if (bc == Boundary::Periodic) {
    for (int j = 0; j < n; ++j) {
      int jn = (j + 1) % n;
      double a = prof.evaluate(mid(j) > grid.upper[0] ? mid(j) - (grid.upper[0] - grid.lower[0])
                                                      : mid(j));
      H(j, j) += a / (h * h);
      H(jn, jn) += a / (h * h);
      H(j, jn) -= a / (h * h);
      H(jn, j) -= a / (h * h);
    }
  } else {
    // Interior nodes x_1..x_n; cells j = 0..n connect x_j to x_{j+1}
    // with x_0, x_{n+1} the boundary.
    for (int j = 0; j <= n; ++j) {
      if (bc == Boundary::Neumann && (j == 0 || j == n)) continue;  // no-flux
      double xm = grid.lower[0] + (j + 0.5) * h;
      double a = prof.evaluate(xm);
      double w = a / (h * h);
      if (j > 0) H(j - 1, j - 1) += w;
      if (j < n) H(j, j) += w;
      if (j > 0 && j < n) {
        H(j - 1, j) -= w;
        H(j, j - 1) -= w;
      }
    }
  }
  return {grid, std::move(H), bc, prof.tag(), {}};
}

DiscreteOperator assemble_2d(const CoefficientProfile& prof, const Grid& grid,
                             Boundary bc) {
  const int nx = grid.npts[0], ny = grid.npts[1];
  const double hx = grid.spacing(0), hy = grid.spacing(1);
  const int n = nx * ny;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);

  auto idx = [&](int i, int j) { return i * ny + j; };
  const bool per = (bc == Boundary::Periodic);

  // Cells are the squares between node columns/rows; Dirichlet grids get a
  // ring of zero boundary values so cells run -1..n-1, Neumann drops the
  // boundary cells, periodic wraps.
  int clo = per ? 0 : (bc == Boundary::Dirichlet ? -1 : 0);
  int cxhi = per ? nx - 1 : (bc == Boundary::Dirichlet ? nx - 1 : nx - 2);
  int cyhi = per ? ny - 1 : (bc == Boundary::Dirichlet ? ny - 1 : ny - 2);

  auto node_id = [&](int i, int j) -> int {  // -1 encodes a Dirichlet zero
    if (per) return idx((i + nx) % nx, (j + ny) % ny);
    if (i < 0 || i >= nx || j < 0 || j >= ny) return -1;
    return idx(i, j);
  };
  auto coord = [&](int axis, int i) {
    return grid.lower[axis] + grid.spacing(axis) * (per ? i : i + 1);
  };

  for (int ci = clo; ci <= cxhi; ++ci) {
    for (int cj = clo; cj <= cyhi; ++cj) {
      double xm = coord(0, ci) + 0.5 * hx;
      double ym = coord(1, cj) + 0.5 * hy;
      Eigen::Matrix2d a;
      if (prof.kind() == ProfileKind::MatrixDiag2D) {
        a = prof.evaluate(xm, ym);
      } else {
        a = prof.evaluate(xm) * Eigen::Matrix2d::Identity();
      }
      // Cell-centered gradient from the 4 corner values:
      //   gx = (f10 - f00 + f11 - f01) / (2 hx),  gy analogous.
      int c00 = node_id(ci, cj), c10 = node_id(ci + 1, cj);
      int c01 = node_id(ci, cj + 1), c11 = node_id(ci + 1, cj + 1);
      int corners[4] = {c00, c10, c01, c11};
      double gx[4] = {-1 / (2 * hx), 1 / (2 * hx), -1 / (2 * hx), 1 / (2 * hx)};
      double gy[4] = {-1 / (2 * hy), -1 / (2 * hy), 1 / (2 * hy), 1 / (2 * hy)};
      for (int u = 0; u < 4; ++u) {
        if (corners[u] < 0) continue;
        for (int v = 0; v < 4; ++v) {
          if (corners[v] < 0) continue;
          double q = a(0, 0) * gx[u] * gx[v] + a(0, 1) * gx[u] * gy[v] +
                     a(1, 0) * gy[u] * gx[v] + a(1, 1) * gy[u] * gy[v];
          H(corners[u], corners[v]) += q;
        }
      }
    }
  }
  return {grid, std::move(H), bc, prof.tag(), {}};
}

}  // namespace

DiscreteOperator assemble(const CoefficientProfile& prof, const Grid& grid,
                          Boundary bc) {
  if (prof.degenerate())
    throw std::invalid_argument("cannot assemble a degenerate (a == 0) profile");
  if (grid.periodic != (bc == Boundary::Periodic))
    throw std::invalid_argument("grid periodicity must match the boundary condition");

  DiscreteOperator op =
      grid.dim == 1 ? assemble_1d(prof, grid, bc) : assemble_2d(prof, grid, bc);

  if (prof.kind() == ProfileKind::Periodic) {
    double period = prof.params()[2];
    if (period / grid.spacing(0) < 8.0)
      op.warnings.push_back("grid resolves fewer than 8 points per coefficient period");
  }
  return op;
}

Eigen::VectorXcd position_multiplier(
    const Grid& grid, const std::function<std::complex<double>(double)>& phi) {
  if (grid.dim != 1) throw std::invalid_argument("position multiplier: 1D grids only");
  const int n = grid.npts[0];
  Eigen::VectorXcd d(n);
  for (int j = 0; j < n; ++j) {
    d(j) = phi(grid.node(0, j));
    if (!std::isfinite(std::abs(d(j))))
      throw std::domain_error("position multiplier not finite on a grid node");
  }
  return d;
}

Eigen::VectorXd position_multiplier_real(const Grid& grid,
                                         const std::function<double(double)>& phi) {
  const int n = grid.npts[0];
  Eigen::VectorXd d(n);
  for (int j = 0; j < n; ++j) d(j) = phi(grid.node(0, j));
  return d;
}

Eigen::VectorXcd phase_multiplier(const Grid& grid, double k) {
  return position_multiplier(grid, [k](double x) { return std::exp(kI * k * x); });
}

std::vector<double> fourier_frequencies(const Grid& grid) {
  if (!grid.periodic) throw std::invalid_argument("frequencies need a periodic grid");
  const int n = grid.npts[0];
  const double L = grid.upper[0] - grid.lower[0];
  std::vector<double> ks(n);
  for (int j = 0; j < n; ++j) {
    int m = j - n / 2;
    ks[j] = 2.0 * kPi * m / L;
  }
  return ks;
}

namespace {
Eigen::MatrixXcd dft_matrix(const Grid& grid) {
  const int n = grid.npts[0];
  Eigen::MatrixXcd F(n, n);
  auto ks = fourier_frequencies(grid);
  const double s = 1.0 / std::sqrt(double(n));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      F(j, l) = s * std::exp(-kI * ks[j] * grid.node(0, l));
  return F;
}
}  // namespace

Eigen::MatrixXcd fourier_multiplier(
    const Grid& grid, const std::function<std::complex<double>(double)>& g) {
  if (!grid.periodic)
    throw std::invalid_argument("fourier multiplier needs a periodic grid");
  if (grid.dim != 1) throw std::invalid_argument("fourier multiplier: 1D grids only");
  Eigen::MatrixXcd F = dft_matrix(grid);
  auto ks = fourier_frequencies(grid);
  Eigen::VectorXcd d(grid.npts[0]);
  for (int j = 0; j < grid.npts[0]; ++j) d(j) = g(ks[j]);
  return F.adjoint() * d.asDiagonal() * F;
}

bool translation_is_integer_shift(const Grid& grid, double s) {
  double m = s / grid.spacing(0);
  return std::abs(m - std::round(m)) < 1e-12 * std::max(1.0, std::abs(m));
}

Eigen::MatrixXcd translation(const Grid& grid, double s) {
  if (!grid.periodic) throw std::invalid_argument("translation needs a periodic grid");
  const int n = grid.npts[0];
  if (translation_is_integer_shift(grid, s)) {
    int m = static_cast<int>(std::llround(s / grid.spacing(0)));
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) U(j, ((j + m) % n + n) % n) = 1.0;  // (Uf)_j = f_{j+m}
    return U;
  }
  return fourier_multiplier(grid, [s](double k) { return std::exp(kI * s * k); });
}

void export_triplets(const DiscreteOperator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  const auto& M = op.matrix;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0.0) out << i << " " << j << " " << M(i, j) << "\n";
}

}  // namespace divform
