#include "divform/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace divform {

namespace {

// Composite Simpson over a tabulated integrand on a uniform grid.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  double h = (b - a) / n, sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

std::function<double(double)> table_interp(std::shared_ptr<std::vector<double>> xs,
                                           std::shared_ptr<std::vector<double>> ys) {
  return [xs, ys](double x) {
    const auto& X = *xs;
    const auto& Y = *ys;
    auto it = std::upper_bound(X.begin(), X.end(), x);
    size_t i = (it == X.begin()) ? 0 : (it - X.begin()) - 1;
    if (i + 1 >= X.size()) i = X.size() - 2;
    double t = (x - X[i]) / (X[i + 1] - X[i]);
    return Y[i] + t * (Y[i + 1] - Y[i]);
  };
}

}  // namespace

LiouvilleTransform transform(const CoefficientProfile& profile, Interval x_window,
                             int samples) {
  if (profile.smoothness() < 2)
    throw std::invalid_argument(
        "liouville transform requires a twice continuously differentiable profile");
  if (!profile.domain().contains(x_window))
    throw std::domain_error("x-window outside profile domain");

  LiouvilleTransform tr;
  tr.x_window = x_window;
  const double shift = profile.shift();

  switch (profile.kind()) {
    case ProfileKind::Uniform: {
      double c = profile.params()[0];
      double rc = std::sqrt(c), qc = std::pow(c, 0.25);
      tr.closed_form = true;
      tr.s_of_x = [rc](double x) { return x / rc; };
      tr.x_of_s = [rc](double s) { return s * rc; };
      tr.sigma_of_s = [qc](double) { return qc; };
      tr.v_of_s = [](double) { return 0.0; };
      break;
    }
    case ProfileKind::ExpDecay: {
      double r = profile.params()[0];
      tr.closed_form = true;
      // s = (2/r) e^{r u / 2} with u = x + shift; for r = 2 this is s = e^x.
      tr.s_of_x = [r, shift](double x) { return (2.0 / r) * std::exp(0.5 * r * (x + shift)); };
      tr.x_of_s = [r, shift](double s) { return (2.0 / r) * std::log(0.5 * r * s) - shift; };
      tr.sigma_of_s = [r](double s) { return std::pow(0.5 * r * s, -0.5); };
      tr.v_of_s = [](double s) { return 3.0 / (4.0 * s * s); };
      break;
    }
    case ProfileKind::Power: {
      double alpha = profile.params()[0];
      double beta = 1.0 - 0.5 * alpha;
      double gamma = alpha / (4.0 * beta);
      tr.closed_form = true;
      tr.s_of_x = [beta, shift](double x) { return std::pow(x + shift, beta) / beta; };
      tr.x_of_s = [beta, shift](double s) { return std::pow(beta * s, 1.0 / beta) - shift; };
      tr.sigma_of_s = [beta, gamma](double s) { return std::pow(beta * s, gamma); };
      tr.v_of_s = [gamma](double s) { return gamma * (gamma - 1.0) / (s * s); };
      break;
    }
    default: {
      // Numeric route: cumulative quadrature for s(x), then 4th-order central
      // differences of sigma on the uniform s-grid (sigma''/sigma amplifies
      // noise, so the derivative order exceeds the assembly order).
      auto xs = std::make_shared<std::vector<double>>(samples + 1);
      auto ss = std::make_shared<std::vector<double>>(samples + 1);
      double h = x_window.length() / samples;
      (*xs)[0] = x_window.lo;
      (*ss)[0] = 0.0;
      for (int i = 1; i <= samples; ++i) {
        double x0 = x_window.lo + (i - 1) * h, x1 = x_window.lo + i * h;
        double mid = 0.5 * (x0 + x1);
        double df = (1.0 / std::sqrt(profile.evaluate(x0)) +
                     4.0 / std::sqrt(profile.evaluate(mid)) +
                     1.0 / std::sqrt(profile.evaluate(x1))) * h / 6.0;
        (*xs)[i] = x1;
        (*ss)[i] = (*ss)[i - 1] + df;
      }
      tr.s_of_x = table_interp(xs, ss);
      tr.x_of_s = table_interp(ss, xs);

      auto sgrid = std::make_shared<std::vector<double>>(samples + 1);
      auto sig = std::make_shared<std::vector<double>>(samples + 1);
      double ds = ss->back() / samples;
      for (int i = 0; i <= samples; ++i) {
        (*sgrid)[i] = i * ds;
        (*sig)[i] = std::pow(profile.evaluate(tr.x_of_s((*sgrid)[i])), 0.25);
      }
      auto vv = std::make_shared<std::vector<double>>(samples + 1);
      for (int i = 2; i + 2 <= samples; ++i) {
        double d2 = (-(*sig)[i - 2] + 16 * (*sig)[i - 1] - 30 * (*sig)[i] +
                     16 * (*sig)[i + 1] - (*sig)[i + 2]) / (12.0 * ds * ds);
        (*vv)[i] = d2 / (*sig)[i];
      }
      (*vv)[0] = (*vv)[1] = (*vv)[2];
      (*vv)[samples] = (*vv)[samples - 1] = (*vv)[samples - 2];
      tr.sigma_of_s = table_interp(sgrid, sig);
      tr.v_of_s = table_interp(sgrid, vv);
      break;
    }
  }

  tr.s_range = {tr.s_of_x(x_window.lo), tr.s_of_x(x_window.hi)};
  const int ntab = 512;
  for (int i = 0; i <= ntab; ++i) {
    double x = x_window.lo + x_window.length() * i / ntab;
    double s = tr.s_of_x(x);
    tr.x.push_back(x);
    tr.s.push_back(s);
    tr.sigma.push_back(tr.sigma_of_s(s));
    tr.potential.push_back(tr.v_of_s(s));
  }
  return tr;
}

DiscreteOperator schrodinger_operator(const std::function<double(double)>& V,
                                      const Grid& grid_s) {
  if (grid_s.periodic)
    throw std::invalid_argument("schrodinger operator uses Dirichlet boundaries");
  const int n = grid_s.npts[0];
  const double h = grid_s.spacing(0);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double v = V(grid_s.node(0, j));
    if (!std::isfinite(v))
      throw std::domain_error("grid touches a singularity of the potential");
    K(j, j) = 2.0 / (h * h) + v;
    if (j + 1 < n) K(j, j + 1) = K(j + 1, j) = -1.0 / (h * h);
  }
  return {grid_s, std::move(K), Boundary::Dirichlet, "schrodinger", {}};
}

DiscreteOperator schrodinger_operator(const LiouvilleTransform& tr, const Grid& grid_s) {
  if (grid_s.lower[0] < tr.s_range.lo - 1e-12 || grid_s.upper[0] > tr.s_range.hi + 1e-12)
    throw std::domain_error("s-grid outside the transformed range");
  return schrodinger_operator(tr.v_of_s, grid_s);
}

EquivalenceReport verify_equivalence(const CoefficientProfile& profile,
                                     Interval x_window, int n, int count) {
  LiouvilleTransform tr = transform(profile, x_window);

  Grid gx = Grid::line(x_window.lo, x_window.hi, n);
  auto hx = assemble(profile, gx, Boundary::Dirichlet);
  auto ex = eigensolve(hx, count);

  Grid gs = Grid::line(tr.s_range.lo, tr.s_range.hi, n);
  auto ks = schrodinger_operator(tr, gs);
  auto es = eigensolve(ks, count);

  EquivalenceReport rep;
  rep.n = n;
  for (int i = 0; i < count; ++i) {
    rep.x_eigs.push_back(ex.eigenvalues(i));
    rep.s_eigs.push_back(es.eigenvalues(i));
    double rel = std::abs(ex.eigenvalues(i) - es.eigenvalues(i)) /
                 std::max(std::abs(es.eigenvalues(i)), 1e-300);
    rep.rel_errors.push_back(rel);
    rep.max_rel_error = std::max(rep.max_rel_error, rel);
  }

  // Isometry: int |f|^2 dx = int |g|^2 sigma^2 ds for g(s) = f(x(s)).
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> uc(x_window.lo + 0.2 * x_window.length(),
                                            x_window.hi - 0.2 * x_window.length());
  std::uniform_real_distribution<double> uw(0.03 * x_window.length(),
                                            0.1 * x_window.length());
  for (int trial = 0; trial < 50; ++trial) {
    double c = uc(rng), w = uw(rng);
    auto f = [c, w](double x) {
      double u = (x - c) / w;
      return std::exp(-u * u);
    };
    double ix = simpson([&](double x) { return f(x) * f(x); }, x_window.lo,
                        x_window.hi, 4000);
    double is = simpson(
        [&](double s) {
          double g = f(tr.x_of_s(s)), sg = tr.sigma_of_s(s);
          return g * g * sg * sg;
        },
        tr.s_range.lo, tr.s_range.hi, 4000);
    rep.isometry_max_defect = std::max(rep.isometry_max_defect, std::abs(ix - is));
  }
  return rep;
}

}  // namespace divform
