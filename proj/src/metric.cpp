#include "divform/metric.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "divform/spectral.hpp"

namespace divform {

MetricField MetricField::closed_1d(const CoefficientProfile& profile, Interval window,
                                   int resolution) {
  MetricField m;
  m.window_ = window;
  m.xs_.resize(resolution + 1);
  m.ss_.resize(resolution + 1);
  double h = window.length() / resolution;
  m.xs_[0] = window.lo;
  m.ss_[0] = 0.0;
  double prev = 1.0 / std::sqrt(profile.evaluate(window.lo));
  for (int i = 1; i <= resolution; ++i) {
    double x = window.lo + i * h;
    double cur = 1.0 / std::sqrt(profile.evaluate(x));
    m.xs_[i] = x;
    m.ss_[i] = m.ss_[i - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  return m;
}

double MetricField::s_of_x(double x) const {
  if (graph_mode_) throw std::logic_error("s(x) table only exists in Closed1D mode");
  if (x < window_.lo || x > window_.hi)
    throw std::domain_error("metric evaluated outside its window");
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  size_t i = (it == xs_.begin()) ? 0 : (it - xs_.begin()) - 1;
  if (i + 1 >= xs_.size()) i = xs_.size() - 2;
  double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
  return ss_[i] + t * (ss_[i + 1] - ss_[i]);
}

double MetricField::distance(double x, double y) const {
  if (graph_mode_) return distance({x, 0.0}, {y, 0.0});
  return std::abs(s_of_x(y) - s_of_x(x));
}

MetricField MetricField::graph_nd(const CoefficientProfile& profile, const Grid& grid) {
  MetricField m;
  m.graph_mode_ = true;
  m.grid_ = grid;
  m.window_ = {grid.lower[0], grid.upper[0]};
  const auto pts = grid.points();
  const int n = static_cast<int>(pts.size());
  m.adj_.resize(n);

  auto edge_len = [&](int u, int v) {
    double mx = 0.5 * (pts[u][0] + pts[v][0]);
    double my = 0.5 * (pts[u][1] + pts[v][1]);
    double a;
    if (profile.kind() == ProfileKind::MatrixDiag2D) {
      // Direction-aware weight: quadratic form along the edge direction.
      Eigen::Vector2d dir(pts[v][0] - pts[u][0], pts[v][1] - pts[u][1]);
      double len = dir.norm();
      dir /= len;
      a = dir.transpose() * profile.evaluate(mx, my) * dir;
      return len / std::sqrt(a);
    }
    a = profile.evaluate(mx);
    double dx = pts[v][0] - pts[u][0], dy = pts[v][1] - pts[u][1];
    return std::sqrt(dx * dx + dy * dy) / std::sqrt(a);
  };

  if (grid.dim == 1) {
    for (int j = 0; j + 1 < n; ++j) {
      double w = edge_len(j, j + 1);
      m.adj_[j].push_back({j + 1, w});
      m.adj_[j + 1].push_back({j, w});
    }
  } else {
    const int nx = grid.npts[0], ny = grid.npts[1];
    auto idx = [&](int i, int j) { return i * ny + j; };
    // 8-neighbor stencil.
    const int di[4] = {1, 0, 1, 1};
    const int dj[4] = {0, 1, 1, -1};
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        for (int k = 0; k < 4; ++k) {
          int i2 = i + di[k], j2 = j + dj[k];
          if (i2 < 0 || i2 >= nx || j2 < 0 || j2 >= ny) continue;
          int u = idx(i, j), v = idx(i2, j2);
          double w = edge_len(u, v);
          m.adj_[u].push_back({v, w});
          m.adj_[v].push_back({u, w});
        }
  }
  return m;
}

int MetricField::nearest_node(std::array<double, 2> p) const {
  const auto pts = grid_.points();
  int best = 0;
  double bd = 1e300;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    double d = std::hypot(pts[i][0] - p[0], pts[i][1] - p[1]);
    if (d < bd) { bd = d; best = i; }
  }
  return best;
}

double MetricField::distance(std::array<double, 2> x, std::array<double, 2> y) const {
  if (!graph_mode_) return distance(x[0], y[0]);
  int src = nearest_node(x), dst = nearest_node(y);
  if (dist_cache_src_ != src) {
    const int n = static_cast<int>(adj_.size());
    dist_cache_.assign(n, 1e300);
    dist_cache_[src] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist_cache_[u]) continue;
      for (auto [v, w] : adj_[u])
        if (d + w < dist_cache_[v]) {
          dist_cache_[v] = d + w;
          pq.push({d + w, v});
        }
    }
    dist_cache_src_ = src;
  }
  return dist_cache_[dst];
}

double MetricField::set_distance(const std::vector<double>& E,
                                 const std::vector<double>& F) const {
  if (E.empty() || F.empty())
    throw std::invalid_argument("set distance needs nonempty sets");
  double best = 1e300;
  for (double x : E)
    for (double y : F) best = std::min(best, distance(x, y));
  return best;
}

std::vector<int> nodes_in(const Grid& grid, Interval iv) {
  std::vector<int> out;
  for (int j = 0; j < grid.npts[0]; ++j)
    if (iv.contains(grid.node(0, j))) out.push_back(j);
  return out;
}

CubePartition CubePartition::unit_cubes(const Grid& grid) {
  CubePartition p;
  if (grid.dim != 1)
    throw std::invalid_argument("unit cube partition implemented for 1D grids");
  int cmin = static_cast<int>(std::floor(grid.node(0, 0) + 0.5));
  int cmax = static_cast<int>(std::floor(grid.node(0, grid.npts[0] - 1) + 0.5));
  for (int c = cmin; c <= cmax; ++c) {
    std::vector<int> mem;
    for (int j = 0; j < grid.npts[0]; ++j) {
      double x = grid.node(0, j);
      if (x >= c - 0.5 && x < c + 0.5) mem.push_back(j);
    }
    if (!mem.empty()) {
      p.centers.push_back(c);
      p.members.push_back(std::move(mem));
    }
  }
  return p;
}

HeatBoundReport verify_heat_bound(const DiscreteOperator& op, const MetricField& metric,
                                  const std::vector<std::pair<Interval, Interval>>& pairs,
                                  const std::vector<double>& ts, double slack) {
  HeatBoundReport rep;
  rep.slack = slack;
  const double noise_floor = 1e-11;  // eigendecomposition round-off level
  for (double t : ts) {
    Eigen::MatrixXd E = heat(op, t);
    int pid = 0;
    for (const auto& [ei, fi] : pairs) {
      auto enodes = nodes_in(op.grid, ei);
      auto fnodes = nodes_in(op.grid, fi);
      if (enodes.empty() || fnodes.empty()) { ++pid; continue; }
      Eigen::MatrixXd block(enodes.size(), fnodes.size());
      for (size_t i = 0; i < enodes.size(); ++i)
        for (size_t j = 0; j < fnodes.size(); ++j)
          block(i, j) = E(enodes[i], fnodes[j]);
      double measured = svd_norm(block);
      std::vector<double> exs, fxs;
      for (int j : enodes) exs.push_back(op.grid.node(0, j));
      for (int j : fnodes) fxs.push_back(op.grid.node(0, j));
      double d = metric.set_distance(exs, fxs);
      double bound = std::exp(-d * d / (4.0 * t));
      bool pass = measured <= bound * (1.0 + slack) + noise_floor;
      rep.rows.push_back({pid, pid, t, measured, bound, measured / std::max(bound, 1e-300), pass});
      if (!pass) ++rep.violations;
      ++pid;
    }
  }
  return rep;
}

BlockDecayTable block_heat_decay(const DiscreteOperator& op,
                                 const CubePartition& part, double t) {
  BlockDecayTable tab;
  tab.t = t;
  Eigen::MatrixXd E = heat(op, t);
  const int nc = static_cast<int>(part.centers.size());
  int rmax = part.centers.back() - part.centers.front();
  for (int r = -rmax; r <= rmax; ++r) {
    double mu = 0.0;
    bool any = false;
    for (int a = 0; a < nc; ++a)
      for (int b = 0; b < nc; ++b) {
        if (part.centers[b] - part.centers[a] != r) continue;
        any = true;
        Eigen::MatrixXd blk(part.members[a].size(), part.members[b].size());
        for (size_t i = 0; i < part.members[a].size(); ++i)
          for (size_t j = 0; j < part.members[b].size(); ++j)
            blk(i, j) = E(part.members[a][i], part.members[b][j]);
        mu = std::max(mu, svd_norm(blk));
      }
    if (any) {
      tab.r.push_back(r);
      tab.mu.push_back(mu);
    }
  }

  // Fit log mu(r) = -(|r|-k)^2/(4 c t) as a quadratic in |r| over the
  // resolved tail (mu above round-off, r != 0).
  std::vector<double> rs, ls;
  for (size_t i = 0; i < tab.r.size(); ++i) {
    if (tab.r[i] <= 0) continue;  // symmetric; fit the positive side
    if (tab.mu[i] < 1e-13) continue;
    rs.push_back(tab.r[i]);
    ls.push_back(std::log(tab.mu[i]));
  }
  if (rs.size() >= 3) {
    Eigen::MatrixXd X(rs.size(), 3);
    Eigen::VectorXd y(rs.size());
    for (size_t i = 0; i < rs.size(); ++i) {
      X(i, 0) = rs[i] * rs[i];
      X(i, 1) = rs[i];
      X(i, 2) = 1.0;
      y(i) = ls[i];
    }
    Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
    double A = beta(0), B = beta(1);
    if (A < 0) {
      tab.fitted_c = -1.0 / (4.0 * A * t);
      tab.fitted_k = -B / (2.0 * A);
    }
    Eigen::VectorXd res = y - X * beta;
    double sst = (y.array() - y.mean()).square().sum();
    tab.r2 = sst > 0 ? 1.0 - res.squaredNorm() / sst : 1.0;
  }
  return tab;
}

}  // namespace divform
