#include "divform/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace divform {

namespace {

bool is_tridiagonal(const Eigen::MatrixXd& M) {
  const int n = static_cast<int>(M.rows());
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (M(i, j) != 0.0 || M(j, i) != 0.0) return false;
  return true;
}

// Number of eigenvalues of the symmetric tridiagonal (d, e) strictly below x,
// by the Sturm/LDL^T sign count.
int sturm_count(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double x) {
  const int n = static_cast<int>(d.size());
  int count = 0;
  double q = d(0) - x;
  if (q < 0) ++count;
  for (int i = 1; i < n; ++i) {
    double denom = q;
    if (denom == 0.0) denom = 1e-300;
    q = d(i) - x - e(i - 1) * e(i - 1) / denom;
    if (q < 0) ++count;
  }
  return count;
}

// Solve (T - sigma I) x = b with partial pivoting (T tridiagonal).
// Fill-in from row swaps is limited to one extra superdiagonal.
Eigen::VectorXd tridiag_shifted_solve(const Eigen::VectorXd& d,
                                      const Eigen::VectorXd& e, double sigma,
                                      Eigen::VectorXd b) {
  const int n = static_cast<int>(d.size());
  Eigen::VectorXd diag = d.array() - sigma;
  Eigen::VectorXd upper = Eigen::VectorXd::Zero(std::max(0, n - 1));
  Eigen::VectorXd upper2 = Eigen::VectorXd::Zero(std::max(0, n - 2));
  for (int i = 0; i + 1 < n; ++i) upper(i) = e(i);
  for (int i = 0; i + 1 < n; ++i) {
    double sub = e(i);  // row i+1 entry in column i (untouched so far)
    if (std::abs(sub) > std::abs(diag(i))) {
      // Swap rows i and i+1.
      double old_di = diag(i), old_ui = upper(i);
      diag(i) = sub;
      upper(i) = diag(i + 1);
      if (i + 2 < n) upper2(i) = upper(i + 1);
      double m = old_di / diag(i);
      diag(i + 1) = old_ui - m * upper(i);
      if (i + 2 < n) upper(i + 1) = -m * upper2(i);
      std::swap(b(i), b(i + 1));
      b(i + 1) -= m * b(i);
    } else {
      if (diag(i) == 0.0) diag(i) = 1e-300;
      double m = sub / diag(i);
      diag(i + 1) -= m * upper(i);
      b(i + 1) -= m * b(i);
    }
  }
  if (diag(n - 1) == 0.0) diag(n - 1) = 1e-300;
  Eigen::VectorXd x(n);
  x(n - 1) = b(n - 1) / diag(n - 1);
  if (n >= 2) x(n - 2) = (b(n - 2) - upper(n - 2) * x(n - 1)) / diag(n - 2);
  for (int i = n - 3; i >= 0; --i)
    x(i) = (b(i) - upper(i) * x(i + 1) - upper2(i) * x(i + 2)) / diag(i);
  return x;
}

SpectralData tridiag_lowest(const Eigen::MatrixXd& M, int count, bool want_vectors) {
  const int n = static_cast<int>(M.rows());
  Eigen::VectorXd d(n), e(n - 1);
  for (int i = 0; i < n; ++i) d(i) = M(i, i);
  for (int i = 0; i + 1 < n; ++i) e(i) = M(i, i + 1);

  // Gershgorin bounds.
  double lo = d(0), hi = d(0);
  for (int i = 0; i < n; ++i) {
    double r = (i > 0 ? std::abs(e(i - 1)) : 0.0) + (i + 1 < n ? std::abs(e(i)) : 0.0);
    lo = std::min(lo, d(i) - r);
    hi = std::max(hi, d(i) + r);
  }

  SpectralData out;
  out.eigenvalues.resize(count);
  double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
  for (int k = 0; k < count; ++k) {
    double a = lo, b = hi;
    // Bisection: find the k-th eigenvalue (0-based).
    while (b - a > 1e-14 * scale + 1e-300) {
      double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;  // no further representable midpoints
      if (sturm_count(d, e, m) > k)
        b = m;
      else
        a = m;
    }
    out.eigenvalues(k) = 0.5 * (a + b);
  }

  if (want_vectors) {
    out.eigenvectors.resize(n, count);
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < count; ++k) {
      double lam = out.eigenvalues(k);
      // Offset relative to the eigenvalue, not the matrix norm: for stiff
      // operators (||T|| >> lambda) a norm-relative shift would land between
      // eigenvalues and inverse iteration would converge to the wrong pair.
      double sep = 1e-10 * std::max(1.0, std::abs(lam));
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v(i) = gauss(rng);
      for (int it = 0; it < 4; ++it) {
        v = tridiag_shifted_solve(d, e, lam + sep, v);
        // Deflate against earlier vectors in a near-degenerate cluster.
        for (int j = 0; j < k; ++j)
          if (std::abs(out.eigenvalues(j) - lam) < 1e-6 * scale)
            v -= out.eigenvectors.col(j).dot(v) * out.eigenvectors.col(j);
        v.normalize();
      }
      out.eigenvectors.col(k) = v;
    }
  }
  return out;
}

}  // namespace

Eigen::VectorXd all_eigenvalues(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

SpectralData eigensolve(const Eigen::MatrixXd& M, int count, bool want_vectors) {
  const int n = static_cast<int>(M.rows());
  if (count > n) throw std::invalid_argument("eigensolve: count exceeds dimension");

  SpectralData out;
  if (n > 512 && count <= n / 4 && is_tridiagonal(M)) {
    out = tridiag_lowest(M, count, want_vectors);
  } else if (n <= 8192) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        M, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigensolve: dense solver failed to converge");
    out.eigenvalues = es.eigenvalues().head(count);
    if (want_vectors) out.eigenvectors = es.eigenvectors().leftCols(count);
  } else {
    // Lanczos with full reorthogonalization for the lowest pairs.
    const int m = std::min(n, std::max(8 * count, 200));
    Eigen::MatrixXd V(n, m);
    Eigen::VectorXd alpha(m), beta(m);
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    v.normalize();
    V.col(0) = v;
    Eigen::VectorXd w;
    int steps = m;
    for (int j = 0; j < m; ++j) {
      w = M * V.col(j);
      alpha(j) = V.col(j).dot(w);
      w -= alpha(j) * V.col(j);
      if (j > 0) w -= beta(j - 1) * V.col(j - 1);
      w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
      beta(j) = w.norm();
      if (beta(j) < 1e-13) { steps = j + 1; break; }
      if (j + 1 < m) V.col(j + 1) = w / beta(j);
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
    for (int j = 0; j < steps; ++j) {
      T(j, j) = alpha(j);
      if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    out.eigenvalues = es.eigenvalues().head(count);
    if (want_vectors)
      out.eigenvectors = V.leftCols(steps) * es.eigenvectors().leftCols(count);
  }

  if (want_vectors) {
    out.residuals.resize(count);
    for (int k = 0; k < count; ++k) {
      Eigen::VectorXd w = M * out.eigenvectors.col(k);
      double rho = out.eigenvectors.col(k).dot(w);  // Rayleigh refinement
      out.eigenvalues(k) = rho;
      out.residuals(k) = (w - rho * out.eigenvectors.col(k)).norm();
    }
  }
  return out;
}

SpectralData eigensolve(const DiscreteOperator& op, int count, bool want_vectors) {
  return eigensolve(op.matrix, count, want_vectors);
}

Eigen::MatrixXd resolvent(const Eigen::MatrixXd& H, double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("resolvent: alpha must be positive");
  const int n = static_cast<int>(H.rows());
  Eigen::MatrixXd A = H + alpha * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd R = A.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
  return 0.5 * (R + R.transpose());
}

Eigen::MatrixXd resolvent(const DiscreteOperator& op, double alpha) {
  return resolvent(op.matrix, alpha);
}

Eigen::MatrixXd heat(const Eigen::MatrixXd& H, double t) {
  if (t <= 0.0) throw std::invalid_argument("heat: t must be positive");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  Eigen::VectorXd ex = (-t * es.eigenvalues().array()).exp();
  Eigen::MatrixXd E =
      es.eigenvectors() * ex.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (E + E.transpose());
}

Eigen::MatrixXd heat(const DiscreteOperator& op, double t) { return heat(op.matrix, t); }

Eigen::MatrixXd sqrt_resolvent(const Eigen::MatrixXd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  Eigen::VectorXd f(es.eigenvalues().size());
  for (int i = 0; i < f.size(); ++i)
    f(i) = 1.0 / (std::sqrt(std::max(0.0, es.eigenvalues()(i))) + 1.0);
  Eigen::MatrixXd R = es.eigenvectors() * f.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (R + R.transpose());
}

namespace {
template <typename Mat>
double power_opnorm(const Mat& M) {
  using Vec = Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>;
  const int n = static_cast<int>(M.cols());
  if (n == 0 || M.rows() == 0) return 0.0;
  std::mt19937_64 rng(7777);
  std::normal_distribution<double> gauss;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = gauss(rng);
  v.normalize();
  double prev = 0.0, cur = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vec w = M.adjoint() * (M * v);
    cur = std::sqrt(std::abs(v.dot(w)));
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    if (it > 3 && std::abs(cur - prev) <= 1e-7 * std::max(cur, 1e-300)) break;
    prev = cur;
  }
  return cur;
}
}  // namespace

double opnorm(const Eigen::MatrixXd& M) { return power_opnorm(M); }
double opnorm(const Eigen::MatrixXcd& M) { return power_opnorm(M); }

double svd_norm(const Eigen::MatrixXd& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  return Eigen::BDCSVD<Eigen::MatrixXd>(M).singularValues()(0);
}

double svd_norm(const Eigen::MatrixXcd& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  return Eigen::BDCSVD<Eigen::MatrixXcd>(M).singularValues()(0);
}

SpectrumEstimate essential_spectrum_estimate(const CoefficientProfile& profile,
                                             const EssentialSpectrumConfig& cfg) {
  if (cfg.half_widths.size() < 3)
    throw std::invalid_argument("essential spectrum estimate needs >= 3 domain sizes");

  struct Run {
    double L;
    Boundary bc;
    std::vector<double> vals;
    std::vector<Interval> clusters;
  };
  std::vector<Run> runs;

  double median_spacing = 0.0;
  for (double L : cfg.half_widths) {
    int n = std::max(8, static_cast<int>(std::lround(cfg.points_per_unit * 2 * L)));
    // Power-type profiles live on (0, inf); use (margin, 2L) there.
    Interval dom = profile.domain();
    double lo = std::max(-L, dom.lo + 1e-9 + (dom.lo > -1e300 ? 0.05 : 0.0));
    double hi = lo + 2 * L;
    Grid g = Grid::line(lo, hi, n);
    for (Boundary bc : {Boundary::Dirichlet, Boundary::Neumann}) {
      auto op = assemble(profile, g, bc);
      Eigen::VectorXd ev = all_eigenvalues(op.matrix);
      Run r{L, bc, {}, {}};
      for (int i = 0; i < ev.size(); ++i)
        if (ev(i) >= cfg.window.lo - 1e-12 && ev(i) <= cfg.window.hi) r.vals.push_back(ev(i));
      std::sort(r.vals.begin(), r.vals.end());
      r.clusters = cluster_intervals(r.vals, cfg.tol.cluster_gap_factor);
      runs.push_back(std::move(r));
    }
  }

  // tol_L from the finest (largest L) Dirichlet run.
  const Run* finest_d = nullptr;
  const Run* finest_n = nullptr;
  for (const auto& r : runs) {
    if (r.bc == Boundary::Dirichlet && (!finest_d || r.L > finest_d->L)) finest_d = &r;
    if (r.bc == Boundary::Neumann && (!finest_n || r.L > finest_n->L)) finest_n = &r;
  }
  if (finest_d->vals.size() >= 2) {
    std::vector<double> gaps;
    for (size_t i = 1; i < finest_d->vals.size(); ++i)
      gaps.push_back(finest_d->vals[i] - finest_d->vals[i - 1]);
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    median_spacing = gaps[gaps.size() / 2];
  }
  double tol_L = cfg.tol.cluster_gap_factor * std::max(median_spacing, 1e-12);

  // Pollution filter: Dirichlet and Neumann clusters must overlap (within
  // tol_L) at the finest L.
  auto widen = [&](std::vector<Interval> v, double w) {
    for (auto& iv : v) { iv.lo -= w; iv.hi += w; }
    return merge_intervals(std::move(v));
  };
  std::vector<Interval> robust =
      intersect_intervals(widen(finest_d->clusters, tol_L), widen(finest_n->clusters, tol_L));

  // Stability filter: must also be covered at the second-largest L.
  const Run* second_d = nullptr;
  for (const auto& r : runs)
    if (r.bc == Boundary::Dirichlet && r.L < finest_d->L &&
        (!second_d || r.L > second_d->L))
      second_d = &r;
  std::vector<Interval> stable =
      intersect_intervals(robust, widen(second_d->clusters, tol_L));

  SpectrumEstimate est;
  for (const auto& iv : stable) {
    Interval clipped{std::max(iv.lo, cfg.window.lo), std::min(iv.hi, cfg.window.hi)};
    if (clipped.lo > clipped.hi) continue;
    est.intervals.push_back(clipped);
    std::vector<EvidenceRecord> ev;
    for (const auto& r : runs) {
      int inside = 0;
      for (double v : r.vals)
        if (v >= clipped.lo - tol_L && v <= clipped.hi + tol_L) ++inside;
      ev.push_back({r.L, to_string(r.bc), inside});
    }
    est.evidence.push_back(std::move(ev));
    est.inconclusive.push_back(false);
  }
  return est;
}

}  // namespace divform
