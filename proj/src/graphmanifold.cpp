#include "divform/graphmanifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace divform {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Ordinary least squares y ~ b0 + b1 x, returning (b0, b1, R^2).
struct LineFit {
  double b0 = 0.0, b1 = 0.0, r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = std::accumulate(x.begin(), x.end(), 0.0);
  double sy = std::accumulate(y.begin(), y.end(), 0.0);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) return f;
  f.b1 = (n * sxy - sx * sy) / denom;
  f.b0 = (sy - f.b1 * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0, my = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (f.b0 + f.b1 * x[i]);
    ss_res += e * e;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}
}  // namespace

WeightedGraph WeightedGraph::build(int n, std::vector<double> mu,
                                   std::vector<Edge> edges,
                                   std::vector<bool> boundary) {
  if (n <= 0 || static_cast<int>(mu.size()) != n)
    throw std::invalid_argument("graph build: mu must have one entry per vertex");
  for (double m : mu)
    if (!(m > 0.0)) throw std::invalid_argument("graph build: mu must be positive");
  WeightedGraph g;
  g.n_ = n;
  g.mu_ = std::move(mu);
  g.edges_ = std::move(edges);
  g.boundary_ = boundary.empty() ? std::vector<bool>(n, false) : std::move(boundary);
  g.adj_.resize(n);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges_) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n || e.u == e.v ||
        !(e.length > 0.0) || !(e.weight > 0.0))
      throw std::invalid_argument("graph build: bad edge");
    g.adj_[e.u].push_back({e.v, e.length});
    g.adj_[e.v].push_back({e.u, e.length});
    W(e.u, e.v) -= e.weight;
    W(e.v, e.u) -= e.weight;
    W(e.u, e.u) += e.weight;
    W(e.v, e.v) += e.weight;
  }
  // Connectivity check by BFS over the adjacency lists.
  std::vector<bool> seen(n, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (auto [v, len] : g.adj_[u])
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        q.push(v);
      }
  }
  if (count != n) throw std::invalid_argument("graph build: graph is disconnected");

  Eigen::VectorXd inv_sqrt(n);
  for (int i = 0; i < n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(g.mu_[i]);
  g.S_ = inv_sqrt.asDiagonal() * W * inv_sqrt.asDiagonal();
  g.dist_cache_.resize(n);
  return g;
}

WeightedGraph WeightedGraph::path(int n, double mu, double length, double weight) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, length, weight});
  std::vector<bool> boundary(n, false);
  boundary.front() = boundary.back() = true;
  return build(n, std::vector<double>(n, mu), std::move(edges), std::move(boundary));
}

WeightedGraph WeightedGraph::lattice2d(int nx, int ny,
                                       const std::function<double(int, int)>& mu) {
  auto id = [ny](int i, int j) { return i * ny + j; };
  std::vector<double> measure(nx * ny, 1.0);
  if (mu)
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) measure[id(i, j)] = mu(i, j);
  std::vector<Edge> edges;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      if (i + 1 < nx) edges.push_back({id(i, j), id(i + 1, j), 1.0, 1.0});
      if (j + 1 < ny) edges.push_back({id(i, j), id(i, j + 1), 1.0, 1.0});
    }
  std::vector<bool> boundary(nx * ny, false);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1) boundary[id(i, j)] = true;
  WeightedGraph g = build(nx * ny, std::move(measure), std::move(edges),
                          std::move(boundary));
  g.nx_ = nx;
  g.ny_ = ny;
  if (!mu) {
    g.uniform_lattice_ = true;
    g.factor_x_ = std::make_shared<WeightedGraph>(path(nx));
    g.factor_y_ = std::make_shared<WeightedGraph>(path(ny));
  }
  return g;
}

const std::vector<double>& WeightedGraph::distances_from(int src) const {
  auto& d = dist_cache_[src];
  if (!d.empty()) return d;
  d.assign(n_, kInf);
  if (uniform_lattice_) {
    int si = src / ny_, sj = src % ny_;
    for (int i = 0; i < nx_; ++i)       // unit edges: shortest path is Manhattan
      for (int j = 0; j < ny_; ++j)
        d[i * ny_ + j] = std::abs(i - si) + std::abs(j - sj);
    return d;
  }
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  d[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    for (auto [v, len] : adj_[u])
      if (du + len < d[v]) {
        d[v] = du + len;
        pq.push({d[v], v});
      }
  }
  return d;
}

double WeightedGraph::distance(int x, int y) const { return distances_from(x)[y]; }

std::vector<int> WeightedGraph::ball(int x, double r) const {
  const auto& d = distances_from(x);
  std::vector<int> out;
  for (int v = 0; v < n_; ++v)
    if (d[v] <= r + 1e-12) out.push_back(v);
  return out;
}

double WeightedGraph::volume(int x, double r) const {
  double vol = 0.0;
  for (int v : ball(x, r)) vol += mu_[v];
  return vol;
}

double WeightedGraph::diameter() const {
  double diam = 0.0;
  for (int v = 0; v < n_; ++v)
    diam = std::max(diam, *std::max_element(distances_from(v).begin(),
                                            distances_from(v).end()));
  return diam;
}

Eigen::MatrixXd WeightedGraph::heat_operator(double t) const {
  if (uniform_lattice_) {
    Eigen::MatrixXd Ex = factor_x_->heat_operator(t);
    Eigen::MatrixXd Ey = factor_y_->heat_operator(t);
    Eigen::MatrixXd E(n_, n_);
    for (int i = 0; i < nx_; ++i)
      for (int j = 0; j < ny_; ++j)
        for (int k = 0; k < nx_; ++k)
          for (int l = 0; l < ny_; ++l)
            E(i * ny_ + j, k * ny_ + l) = Ex(i, k) * Ey(j, l);
    return E;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S_);
  Eigen::VectorXd decay = (-t * es.eigenvalues().array()).exp();
  return es.eigenvectors() * decay.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd WeightedGraph::heat_kernel(double t) const {
  Eigen::MatrixXd H = heat_operator(t);
  Eigen::VectorXd inv_sqrt(n_);
  for (int i = 0; i < n_; ++i) inv_sqrt(i) = 1.0 / std::sqrt(mu_[i]);
  return inv_sqrt.asDiagonal() * H * inv_sqrt.asDiagonal();
}

std::vector<int> WeightedGraph::interior_centers(double reach) const {
  std::vector<int> out;
  for (int v = 0; v < n_; ++v) {
    if (boundary_[v]) continue;
    bool ok = true;
    for (int w : ball(v, reach))
      if (boundary_[w]) {
        ok = false;
        break;
      }
    if (ok) out.push_back(v);
  }
  return out;
}

namespace {
std::vector<int> thin(const std::vector<int>& v, int max_count) {
  if (static_cast<int>(v.size()) <= max_count) return v;
  std::vector<int> out;
  double step = static_cast<double>(v.size()) / max_count;
  for (int i = 0; i < max_count; ++i) out.push_back(v[static_cast<int>(i * step)]);
  return out;
}
}  // namespace

ConstantEstimate doubling_constant(const WeightedGraph& g,
                                   const std::vector<double>& radii,
                                   int max_centers) {
  ConstantEstimate est;
  for (double r : radii) {
    auto centers = thin(g.interior_centers(2.0 * r), max_centers);
    for (int x : centers) {
      double vr = g.volume(x, r);
      if (vr <= 0.0) continue;
      est.value = std::max(est.value, g.volume(x, 2.0 * r) / vr);
      ++est.samples;
    }
  }
  if (est.samples == 0) {
    est.inconclusive = true;
    est.notes.push_back("all balls are boundary-affected");
  }
  return est;
}

ConstantEstimate poincare_constant(const WeightedGraph& g,
                                   const std::vector<double>& radii,
                                   int max_centers) {
  ConstantEstimate est;
  for (double r : radii) {
    auto centers = thin(g.interior_centers(2.0 * r), max_centers);
    for (int x : centers) {
      auto b2 = g.ball(x, 2.0 * r);
      auto b1 = g.ball(x, r);
      if (b2.size() < 2 || b1.size() < 2) continue;
      std::vector<int> pos(g.size(), -1);
      for (size_t i = 0; i < b2.size(); ++i) pos[b2[i]] = static_cast<int>(i);
      const int m = static_cast<int>(b2.size());

      // Local Dirichlet form: edges with both endpoints inside B_x(2r).
      Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(m, m);
      for (const auto& e : g.edges()) {
        int a = pos[e.u], b = pos[e.v];
        if (a < 0 || b < 0) continue;
        Q(a, a) += e.weight;
        Q(b, b) += e.weight;
        Q(a, b) -= e.weight;
        Q(b, a) -= e.weight;
      }
      // Mass form on B_x(r) with the mu-mean removed over B_x(r).
      Eigen::VectorXd m1 = Eigen::VectorXd::Zero(m);
      double v1 = 0.0;
      for (int v : b1) {
        m1(pos[v]) = g.mu()[v];
        v1 += g.mu()[v];
      }
      Eigen::MatrixXd A = Eigen::MatrixXd(m1.asDiagonal()) - (m1 * m1.transpose()) / v1;

      // Restrict to the range of Q (drops locally constant functions, which
      // are also in the kernel of A).
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esq(Q);
      double qmax = esq.eigenvalues().maxCoeff();
      std::vector<int> keep;
      for (int i = 0; i < m; ++i)
        if (esq.eigenvalues()(i) > 1e-10 * std::max(qmax, 1.0)) keep.push_back(i);
      if (keep.empty()) {
        est.notes.push_back("singular local form skipped at center " +
                            std::to_string(x));
        continue;
      }
      Eigen::MatrixXd Vr(m, keep.size());
      Eigen::VectorXd isq(keep.size());
      for (size_t i = 0; i < keep.size(); ++i) {
        Vr.col(i) = esq.eigenvectors().col(keep[i]);
        isq(i) = 1.0 / std::sqrt(esq.eigenvalues()(keep[i]));
      }
      Eigen::MatrixXd G =
          isq.asDiagonal() * (Vr.transpose() * A * Vr) * isq.asDiagonal();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esg(G, Eigen::EigenvaluesOnly);
      est.value = std::max(est.value, esg.eigenvalues().maxCoeff() / (r * r));
      ++est.samples;
    }
  }
  if (est.samples == 0) {
    est.inconclusive = true;
    est.notes.push_back("all balls are boundary-affected");
  }
  return est;
}

KernelAudit gaussian_fit(const WeightedGraph& g, double t, int max_centers) {
  KernelAudit audit;
  audit.t = t;
  Eigen::MatrixXd H = g.heat_kernel(t);
  auto centers = thin(g.interior_centers(0.0), max_centers);
  if (centers.empty()) centers = thin(std::vector<int>{g.size() / 2}, 1);

  std::vector<double> xs, ys;  // response = log h + log V, predictor = -d^2/t
  for (int x : centers) {
    double vx = g.volume(x, std::sqrt(t));
    const auto& d = g.distances_from(x);
    for (int y = 0; y < g.size(); ++y) {
      if (H(x, y) <= 1e-12) continue;
      xs.push_back(-d[y] * d[y] / t);
      ys.push_back(std::log(H(x, y)) + std::log(vx));
    }
  }
  audit.pairs = static_cast<int>(xs.size());
  LineFit f = fit_line(xs, ys);
  audit.exponent = f.b1;  // Gaussian rate a
  audit.r2 = f.r2;
  // Certify C as the sup, so the bound holds with no violations by
  // construction; max_ratio records how tight it is.
  double log_c = -kInf;
  for (size_t i = 0; i < xs.size(); ++i)
    log_c = std::max(log_c, ys[i] - audit.exponent * xs[i]);
  audit.C = std::exp(log_c);
  for (size_t i = 0; i < xs.size(); ++i)
    audit.max_ratio =
        std::max(audit.max_ratio, std::exp(ys[i] - audit.exponent * xs[i] - log_c));
  if (!(audit.exponent > 0.0))
    audit.violations.push_back("fitted Gaussian rate is not positive");
  return audit;
}

KernelAudit holder_audit(const WeightedGraph& g, double t, int max_centers,
                         int max_pairs) {
  KernelAudit audit;
  audit.t = t;
  Eigen::MatrixXd H = g.heat_kernel(t);
  Eigen::MatrixXd H2 = g.heat_kernel(2.0 * t);
  auto centers = thin(g.interior_centers(0.0), max_centers);
  if (centers.empty()) centers.push_back(g.size() / 2);
  const double root_t = std::sqrt(t);

  // Response log(|h(x,y)-h(x,z)| / h_{2t}(x,y)), predictor log(d(y,z)/sqrt t);
  // slope = alpha, intercept = log C.
  std::vector<double> xs, ys;
  for (int x : centers) {
    for (int y = 0; y < g.size() && static_cast<int>(xs.size()) < max_pairs; ++y) {
      if (H2(x, y) <= 1e-12) continue;
      for (int z : g.ball(y, root_t)) {
        if (z == y) continue;
        double diff = std::abs(H(x, y) - H(x, z));
        if (diff <= 1e-14) continue;
        double d = g.distance(y, z);
        xs.push_back(std::log(d / root_t));
        ys.push_back(std::log(diff / H2(x, y)));
        if (static_cast<int>(xs.size()) >= max_pairs) break;
      }
    }
  }
  audit.pairs = static_cast<int>(xs.size());
  if (xs.empty()) {  // e.g. y == z only: the bound holds vacuously
    audit.exponent = 1.0;
    audit.C = 1.0;
    audit.r2 = 1.0;
    return audit;
  }
  LineFit f = fit_line(xs, ys);
  audit.exponent = std::clamp(f.b1, 1e-3, 1.0);
  audit.r2 = f.r2;
  double log_c = -kInf;
  for (size_t i = 0; i < xs.size(); ++i)
    log_c = std::max(log_c, ys[i] - audit.exponent * xs[i]);
  audit.C = std::exp(log_c);
  for (size_t i = 0; i < xs.size(); ++i)
    audit.max_ratio =
        std::max(audit.max_ratio, std::exp(ys[i] - audit.exponent * xs[i] - log_c));
  return audit;
}

TruncationFit truncation_error(const WeightedGraph& g,
                               const std::vector<double>& radii) {
  TruncationFit fit;
  fit.radii = radii;
  Eigen::MatrixXd E = g.heat_operator(1.0);
  Eigen::MatrixXd H = g.heat_kernel(1.0);
  const int n = g.size();

  std::vector<double> xs, ys;
  for (double r : radii) {
    // theta: 1 on [0,r], linear down to 0 on [r, r+1].
    Eigen::MatrixXd T = E;
    double schur = 0.0;
    for (int x = 0; x < n; ++x) {
      const auto& d = g.distances_from(x);
      double row_tail = 0.0;
      for (int y = 0; y < n; ++y) {
        double theta = d[y] <= r ? 1.0 : (d[y] >= r + 1.0 ? 0.0 : r + 1.0 - d[y]);
        T(x, y) *= theta;
        if (d[y] >= r) row_tail += H(x, y) * g.mu()[y];
      }
      schur = std::max(schur, row_tail);
    }
    Eigen::MatrixXd diff = E - T;
    double err;
    {
      // theta depends only on d, which is symmetric, so diff is symmetric
      // and its norm is the largest |eigenvalue|; power iteration suffices.
      Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
      double lam = 0.0;
      for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd w = diff * v;
        double nw = w.norm();
        if (nw < 1e-300) {
          lam = 0.0;
          break;
        }
        v = w / nw;
        double next = std::abs(v.dot(diff * v));
        if (std::abs(next - lam) <= 1e-9 * std::max(next, 1e-30)) {
          lam = next;
          break;
        }
        lam = next;
      }
      err = lam;
    }
    fit.errors.push_back(err);
    fit.schur_bounds.push_back(schur);
    if (err > 1e-14) {
      xs.push_back(r * r);
      ys.push_back(std::log(err));
    }
  }
  if (xs.size() >= 2) {
    LineFit f = fit_line(xs, ys);
    fit.K = std::exp(f.b0);
    fit.a = -2.0 * f.b1;  // log err = log K - a r^2 / 2
    fit.r2 = f.r2;
  }
  return fit;
}

}  // namespace divform
