#include "divform/affiliation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace divform {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

// On a periodic window the phase e^{ikx} is single-valued only for k on the
// dual lattice 2*pi*m/|window|. Snap requested frequencies there, otherwise
// the sweep measures the wrap discontinuity instead of conjugation
// continuity. The snapped value is reported back in the sample.
double torus_frequency(const Grid& grid, double k) {
  if (!grid.periodic || k == 0.0) return k;
  double base = 2.0 * 3.14159265358979323846 / (grid.upper[0] - grid.lower[0]);
  long m = std::lround(std::abs(k) / base);
  if (m == 0) m = 1;
  return (k < 0.0 ? -1.0 : 1.0) * base * static_cast<double>(m);
}
}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::E_affiliated: return "E_affiliated";
    case Verdict::D_only: return "D_only";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

SweepResult vk_sweep(const Eigen::MatrixXcd& A, const Grid& grid,
                     const std::vector<double>& ks) {
  SweepResult res;
  res.parameter = "k";
  res.grid_points = grid.npts[0];
  res.half_width = 0.5 * (grid.upper[0] - grid.lower[0]);
  for (double k_req : ks) {
    if (k_req == 0.0) {
      res.samples.push_back({0.0, 0.0});
      continue;
    }
    double k = torus_frequency(grid, k_req);
    Eigen::VectorXcd v = phase_multiplier(grid, k);
    Eigen::MatrixXcd conj = v.asDiagonal() * A * v.conjugate().asDiagonal();
    res.samples.push_back({k, opnorm(Eigen::MatrixXcd(conj - A))});
  }
  return res;
}

SweepResult us_sweep(const Eigen::MatrixXcd& A, const Grid& grid,
                     const std::vector<double>& ss) {
  if (!grid.periodic)
    throw std::invalid_argument("us_sweep requires a periodic grid");
  SweepResult res;
  res.parameter = "s";
  res.grid_points = grid.npts[0];
  res.half_width = 0.5 * (grid.upper[0] - grid.lower[0]);
  for (double s : ss) {
    if (s == 0.0) {
      res.samples.push_back({0.0, 0.0});
      continue;
    }
    Eigen::MatrixXcd U = translation(grid, s);
    res.samples.push_back({s, opnorm(Eigen::MatrixXcd(U * A - A))});
  }
  return res;
}

namespace {
Grid study_window(double L, double target_spacing, WindowMode mode) {
  double lo = (mode == WindowMode::Symmetric) ? -L : 0.0;
  double hi = (mode == WindowMode::Symmetric) ? L : 2.0 * L;
  int n = static_cast<int>(std::lround((hi - lo) / target_spacing));
  if (n % 2) ++n;
  n = std::max(n, 16);
  return Grid::line(lo, hi, n, true);
}
}  // namespace

UniformityTable uniformity_study(const CoefficientProfile& profile, double s,
                                 const std::vector<double>& half_widths,
                                 double target_spacing, WindowMode mode) {
  if (half_widths.size() < 4 && s != 0.0 && half_widths.size() < 4)
    throw std::invalid_argument("uniformity study needs >= 4 domain sizes");
  UniformityTable tab;
  tab.s = s;
  for (double L : half_widths) {
    Grid g = study_window(L, target_spacing, mode);
    auto op = assemble(profile, g, Boundary::Periodic);
    Eigen::MatrixXcd U = translation(g, s);
    Eigen::MatrixXcd D = U - Eigen::MatrixXcd::Identity(g.size(), g.size());
    Eigen::MatrixXd rs = sqrt_resolvent(op.matrix);
    Eigen::MatrixXd rp = resolvent(op.matrix, 1.0);
    UniformityRow row;
    row.L = L;
    row.n = g.npts[0];
    row.norm_sqrt = opnorm(Eigen::MatrixXcd(D * rs.cast<std::complex<double>>()));
    row.norm_plain = opnorm(Eigen::MatrixXcd(D * rp.cast<std::complex<double>>()));
    tab.rows.push_back(row);
  }
  for (size_t i = 1; i < tab.rows.size(); ++i)
    if (tab.rows[i].norm_sqrt < tab.rows[i - 1].norm_sqrt - 1e-6)
      tab.monotone_nondecreasing = false;
  for (const auto& r : tab.rows) tab.sup_norm = std::max(tab.sup_norm, r.norm_sqrt);
  return tab;
}

AffiliationVerdict classify(const CoefficientProfile& profile,
                            const ClassifyConfig& cfg) {
  AffiliationVerdict out;
  out.thresholds = cfg;

  bool v_ok = true, u_ok = true, u_fail_witness = false;
  for (double L : cfg.half_widths) {
    Grid g = study_window(L, cfg.target_spacing, cfg.mode);
    auto op = assemble(profile, g, Boundary::Periodic);
    Eigen::MatrixXcd R =
        resolvent(op.matrix, 1.0).cast<std::complex<double>>();
    Eigen::MatrixXcd Rs = sqrt_resolvent(op.matrix).cast<std::complex<double>>();

    SweepResult vs = vk_sweep(R, g, cfg.k_list);
    vs.profile_tag = profile.tag();
    for (auto [k, norm] : vs.samples) {
      out.v_sweep_sup = std::max(out.v_sweep_sup, norm);
      if (norm > cfg.env_coef * std::abs(k) + cfg.env_offset) v_ok = false;
    }
    out.v_sweeps.push_back(std::move(vs));

    SweepResult us = us_sweep(Rs, g, cfg.s_list);
    us.profile_tag = profile.tag();
    for (auto [s, norm] : us.samples) {
      out.u_sweep_sup = std::max(out.u_sweep_sup, norm);
      if (norm > cfg.env_coef * std::abs(s) + cfg.env_offset) u_ok = false;
      if (norm > cfg.theta_fail) u_fail_witness = true;
    }
    out.u_sweeps.push_back(std::move(us));
  }

  out.v_sweep_uniform = v_ok;
  out.u_sweep_uniform = u_ok;
  if (v_ok && u_ok)
    out.verdict = Verdict::E_affiliated;
  else if (v_ok && u_fail_witness)
    out.verdict = Verdict::D_only;
  else
    out.verdict = Verdict::Inconclusive;
  return out;
}

SweepResult form_commutator_sweep(const CoefficientProfile& profile, const Grid& grid,
                                  const std::vector<double>& ks) {
  auto op = assemble(profile, grid,
                     grid.periodic ? Boundary::Periodic : Boundary::Dirichlet);
  const int n = grid.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      op.matrix + Eigen::MatrixXd::Identity(n, n));
  Eigen::VectorXd invsq = es.eigenvalues().array().max(1e-14).rsqrt();
  Eigen::MatrixXd G =
      es.eigenvectors() * invsq.asDiagonal() * es.eigenvectors().transpose();
  Eigen::MatrixXcd Gc = G.cast<std::complex<double>>();

  SweepResult res;
  res.parameter = "k";
  res.grid_points = n;
  res.half_width = 0.5 * (grid.upper[0] - grid.lower[0]);
  res.profile_tag = profile.tag();
  Eigen::MatrixXcd Lmat = op.matrix.cast<std::complex<double>>();
  for (double k_req : ks) {
    if (k_req == 0.0) {
      res.samples.push_back({0.0, 0.0});
      continue;
    }
    double k = torus_frequency(grid, k_req);
    Eigen::VectorXcd v = phase_multiplier(grid, k);
    Eigen::MatrixXcd Lk = v.asDiagonal() * Lmat * v.conjugate().asDiagonal();
    res.samples.push_back({k, opnorm(Eigen::MatrixXcd(Gc * (Lk - Lmat) * Gc))});
  }
  return res;
}

QuadraticFit fit_linear_quadratic(const SweepResult& sweep) {
  std::vector<double> ks, ys;
  for (auto [k, y] : sweep.samples)
    if (k != 0.0) {
      ks.push_back(std::abs(k));
      ys.push_back(y);
    }
  Eigen::MatrixXd X(ks.size(), 2);
  Eigen::VectorXd y(ks.size());
  for (size_t i = 0; i < ks.size(); ++i) {
    X(i, 0) = ks[i];
    X(i, 1) = ks[i] * ks[i];
    y(i) = ys[i];
  }
  Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  QuadraticFit fit;
  fit.c1 = beta(0);
  fit.c2 = beta(1);
  fit.rel_residual = (y - X * beta).norm() / std::max(y.norm(), 1e-300);
  return fit;
}

Regularizer build_regularizer(const Eigen::MatrixXcd& A, const Grid& grid, int budget,
                              double t_min) {
  if (!grid.periodic)
    throw std::invalid_argument("regularizer needs a periodic grid");
  Regularizer reg;
  reg.frequencies = fourier_frequencies(grid);
  const int n = grid.npts[0];

  // Work in the frequency representation: one DFT of A up front, then every
  // multiplier is diagonal.
  Eigen::MatrixXcd F(n, n);
  {
    auto ks = reg.frequencies;
    const double sc = 1.0 / std::sqrt(double(n));
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        F(j, l) = sc * std::exp(-kI * ks[j] * grid.node(0, l));
  }
  Eigen::MatrixXcd Ahat = F * A * F.adjoint();

  auto defect_norm = [&](double t) {
    Eigen::VectorXcd d(n);
    for (int j = 0; j < n; ++j)
      d(j) = 1.0 - std::exp(-reg.frequencies[j] * reg.frequencies[j] * t);
    return opnorm(Eigen::MatrixXcd(d.asDiagonal() * Ahat));
  };

  Eigen::VectorXd f = Eigen::VectorXd::Ones(n);
  for (int step = 1; step <= budget; ++step) {
    double target = std::pow(2.0, -step);
    double t_hi = std::min(1.0, target);  // t_n <= 2^{-n}
    if (defect_norm(t_min) > target) {
      reg.failed_at = step;  // no admissible t_n in the search window
      return reg;
    }
    // Largest admissible t (defect is monotone increasing in t).
    double lo = t_min, hi = t_hi;
    if (defect_norm(t_hi) <= target) {
      lo = t_hi;
    } else {
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (defect_norm(mid) <= target ? lo : hi) = mid;
      }
    }
    double t = lo;
    reg.times.push_back(t);
    reg.partial_norms.push_back(defect_norm(t));
    for (int j = 0; j < n; ++j)
      f(j) += 1.0 - std::exp(-reg.frequencies[j] * reg.frequencies[j] * t);
    reg.f_tables.push_back(std::vector<double>(f.data(), f.data() + n));
    reg.certified_norms.push_back(
        opnorm(Eigen::MatrixXcd(f.cast<std::complex<double>>().asDiagonal() * Ahat)));
  }
  reg.success = true;
  return reg;
}

BandDecomposition band_decompose(const Eigen::MatrixXd& A, const CubePartition& part) {
  BandDecomposition bd;
  bd.partition = part;
  const int n = static_cast<int>(A.rows());
  const int nc = static_cast<int>(part.centers.size());
  int rmax = part.centers.back() - part.centers.front();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (int r = -rmax; r <= rmax; ++r) {
    Eigen::MatrixXd Br = Eigen::MatrixXd::Zero(n, n);
    double mu = 0.0;
    bool any = false;
    for (int a = 0; a < nc; ++a)
      for (int b = 0; b < nc; ++b) {
        if (part.centers[b] - part.centers[a] != r) continue;
        any = true;
        Eigen::MatrixXd blk(part.members[a].size(), part.members[b].size());
        for (size_t i = 0; i < part.members[a].size(); ++i)
          for (size_t j = 0; j < part.members[b].size(); ++j) {
            double v = A(part.members[a][i], part.members[b][j]);
            Br(part.members[a][i], part.members[b][j]) = v;
            blk(i, j) = v;
          }
        mu = std::max(mu, svd_norm(blk));
      }
    if (!any) continue;
    sum += Br;
    bd.offsets.push_back(r);
    bd.band_norms.push_back(svd_norm(Br));
    bd.mu.push_back(mu);
    bd.bands.push_back(std::move(Br));
  }
  bd.reconstruction_error = svd_norm(Eigen::MatrixXd(sum - A));
  return bd;
}

namespace {
double support_radius(const Eigen::MatrixXd& M, const Grid& grid, double center) {
  double r = 0.0;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0.0) {
        r = std::max(r, std::abs(grid.node(0, i) - center));
        r = std::max(r, std::abs(grid.node(0, j) - center));
      }
  return r;
}
}  // namespace

SupportAudit ideal_ops(const Eigen::MatrixXd& A, double r, const Eigen::MatrixXd& B,
                       double s, const Grid& grid) {
  SupportAudit audit;
  const int n = grid.size();
  const double center = 0.5 * (grid.lower[0] + grid.upper[0]);

  // Preconditions: A = P_r A = A P_r, and B has finite range s.
  for (int i = 0; i < n && audit.precondition_ok; ++i)
    for (int j = 0; j < n; ++j) {
      double xi = grid.node(0, i), xj = grid.node(0, j);
      if (A(i, j) != 0.0 &&
          (std::abs(xi - center) > r || std::abs(xj - center) > r)) {
        audit.precondition_ok = false;
        audit.witness = "A has a nonzero entry outside the support ball";
        break;
      }
      if (B(i, j) != 0.0 && std::abs(xi - xj) > s) {
        audit.precondition_ok = false;
        audit.witness = "B has a nonzero entry beyond its declared range";
        break;
      }
    }
  if (!audit.precondition_ok)
    throw std::invalid_argument("ideal_ops precondition: " + audit.witness);

  audit.bound = r + s;
  audit.support_ab = support_radius(A * B, grid, center);
  audit.support_ba = support_radius(B * A, grid, center);
  Eigen::MatrixXd AmI = A - Eigen::MatrixXd::Identity(n, n);
  audit.norm_a_minus_i = svd_norm(AmI);
  return audit;
}

}  // namespace divform
