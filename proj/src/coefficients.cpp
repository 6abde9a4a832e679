#include "divform/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace divform {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

// Fritsch-Carlson monotone cubic slopes. Preserves positivity of positive
// monotone data and never overshoots between samples.
std::vector<double> monotone_slopes(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  const size_t n = x.size();
  std::vector<double> d(n - 1), m(n);
  for (size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0)
      m[i] = 0.0;
    else
      m[i] = (d[i - 1] + d[i]) / 2.0;
  }
  for (size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      m[i] = m[i + 1] = 0.0;
      continue;
    }
    double a = m[i] / d[i], b = m[i + 1] / d[i];
    double s = a * a + b * b;
    if (s > 9.0) {
      double tau = 3.0 / std::sqrt(s);
      m[i] = tau * a * d[i];
      m[i + 1] = tau * b * d[i];
    }
  }
  return m;
}

double hermite_eval(const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<double>& ms, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  size_t i = (it == xs.begin()) ? 0 : static_cast<size_t>(it - xs.begin()) - 1;
  if (i + 1 >= xs.size()) i = xs.size() - 2;
  double h = xs[i + 1] - xs[i];
  double t = (x - xs[i]) / h;
  double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  double h10 = t * (1 - t) * (1 - t);
  double h01 = t * t * (3 - 2 * t);
  double h11 = t * t * (t - 1);
  return h00 * ys[i] + h10 * h * ms[i] + h01 * ys[i + 1] + h11 * h * ms[i + 1];
}
}  // namespace

std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::Uniform: return "uniform";
    case ProfileKind::ExpDecay: return "expdecay";
    case ProfileKind::Power: return "power";
    case ProfileKind::Periodic: return "periodic";
    case ProfileKind::RationalBump: return "rationalbump";
    case ProfileKind::Tabulated: return "tabulated";
    case ProfileKind::MatrixDiag2D: return "matrixdiag2d";
    case ProfileKind::Blend: return "blend";
  }
  return "?";
}

CoefficientProfile::CoefficientProfile(ProfileKind k, std::vector<double> p,
                                       Interval dom, int smooth)
    : kind_(k), params_(std::move(p)), domain_(dom), smoothness_(smooth) {}

CoefficientProfile CoefficientProfile::uniform(double c) {
  if (c < 0.0) throw std::invalid_argument("uniform coefficient must be >= 0");
  CoefficientProfile p(ProfileKind::Uniform, {c}, {-kInf, kInf}, 1000);
  p.degenerate_ = (c == 0.0);
  return p;
}

CoefficientProfile CoefficientProfile::exp_decay(double rate) {
  return CoefficientProfile(ProfileKind::ExpDecay, {rate}, {-kInf, kInf}, 1000);
}

CoefficientProfile CoefficientProfile::power(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("power exponent must lie in (0,2)");
  return CoefficientProfile(ProfileKind::Power, {alpha}, {0.0, kInf}, 2);
}

CoefficientProfile CoefficientProfile::periodic(double mean, double amp, double period) {
  if (mean <= std::abs(amp))
    throw std::invalid_argument("periodic profile must stay positive: mean > |amp|");
  if (period <= 0.0) throw std::invalid_argument("period must be positive");
  return CoefficientProfile(ProfileKind::Periodic, {mean, amp, period}, {-kInf, kInf},
                            1000);
}

CoefficientProfile CoefficientProfile::rational_bump(double scale, double width) {
  if (scale <= 0.0 || width <= 0.0)
    throw std::invalid_argument("rational bump needs positive scale and width");
  return CoefficientProfile(ProfileKind::RationalBump, {scale, width}, {-kInf, kInf},
                            1000);
}

CoefficientProfile CoefficientProfile::tabulated(std::vector<double> xs,
                                                 std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw std::invalid_argument("tabulated profile needs >= 2 matching samples");
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    if (xs[i + 1] <= xs[i]) throw std::invalid_argument("tabulated x not increasing");
  for (double v : ys)
    if (v <= 0.0) throw std::invalid_argument("tabulated values must be positive");
  CoefficientProfile p(ProfileKind::Tabulated, {}, {xs.front(), xs.back()}, 1);
  p.tab_m_ = monotone_slopes(xs, ys);
  p.tab_x_ = std::move(xs);
  p.tab_y_ = std::move(ys);
  return p;
}

CoefficientProfile CoefficientProfile::blend(double left, double right, double center,
                                             double width) {
  if (left <= 0.0 || right <= 0.0 || width <= 0.0)
    throw std::invalid_argument("blend needs positive levels and width");
  return CoefficientProfile(ProfileKind::Blend, {left, right, center, width},
                            {-kInf, kInf}, 1000);
}

CoefficientProfile CoefficientProfile::matrix_diag2d(CoefficientProfile p,
                                                     CoefficientProfile q,
                                                     double theta) {
  Interval dom{std::max(p.domain().lo, q.domain().lo),
               std::min(p.domain().hi, q.domain().hi)};
  CoefficientProfile m(ProfileKind::MatrixDiag2D, {theta}, dom,
                       std::min(p.smoothness(), q.smoothness()));
  m.child_p_ = std::make_shared<CoefficientProfile>(std::move(p));
  m.child_q_ = std::make_shared<CoefficientProfile>(std::move(q));
  return m;
}

Interval CoefficientProfile::domain() const {
  return {domain_.lo - shift_, domain_.hi - shift_};
}

double CoefficientProfile::evaluate_base(double x) const {
  switch (kind_) {
    case ProfileKind::Uniform: return params_[0];
    case ProfileKind::ExpDecay: return std::exp(-params_[0] * x);
    case ProfileKind::Power: return std::pow(x, params_[0]);
    case ProfileKind::Periodic:
      return params_[0] + params_[1] * std::sin(2.0 * kPi * x / params_[2]);
    case ProfileKind::RationalBump: {
      double u = x / params_[1];
      return params_[0] / (1.0 + u * u);
    }
    case ProfileKind::Tabulated:
      return hermite_eval(tab_x_, tab_y_, tab_m_, x);
    case ProfileKind::Blend: {
      double w = 1.0 / (1.0 + std::exp(-(x - params_[2]) / params_[3]));
      return params_[0] + (params_[1] - params_[0]) * w;
    }
    case ProfileKind::MatrixDiag2D:
      throw std::logic_error("matrix profile has no scalar value");
  }
  throw std::logic_error("bad kind");
}

double CoefficientProfile::evaluate(double x) const {
  if (!domain().contains(x))
    throw std::domain_error("coefficient evaluated outside its domain");
  return evaluate_base(x + shift_);
}

Eigen::Matrix2d CoefficientProfile::evaluate(double x, double y) const {
  if (kind_ != ProfileKind::MatrixDiag2D)
    throw std::logic_error("2D evaluation requires a MatrixDiag2D profile");
  double p = child_p_->evaluate(x + shift_);
  double q = child_q_->evaluate(y + shift_);
  double th = params_[0];
  Eigen::Matrix2d r;
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  Eigen::Matrix2d d = Eigen::Vector2d(p, q).asDiagonal();
  return r * d * r.transpose();
}

double CoefficientProfile::derivative_base(double x, int order) const {
  if (order == 0) return evaluate_base(x);
  switch (kind_) {
    case ProfileKind::Uniform: return 0.0;
    case ProfileKind::ExpDecay: {
      double r = params_[0];
      double sgn = (order % 2 == 0) ? 1.0 : -1.0;
      return sgn * std::pow(r, order) * std::exp(-r * x);
    }
    case ProfileKind::Power: {
      double a = params_[0], c = 1.0;
      for (int i = 0; i < order; ++i) c *= (a - i);
      return c * std::pow(x, a - order);
    }
    case ProfileKind::Periodic: {
      double w = 2.0 * kPi / params_[2];
      double ph = w * x + 0.5 * kPi * order;
      return params_[1] * std::pow(w, order) * std::sin(ph);
    }
    case ProfileKind::RationalBump: {
      double s = params_[0], w = params_[1];
      double u = x / w, den = 1.0 + u * u;
      if (order == 1) return -2.0 * s * u / (w * den * den);
      if (order == 2) return s * (6.0 * u * u - 2.0) / (w * w * den * den * den);
      break;
    }
    case ProfileKind::Blend: {
      double l = params_[0], r = params_[1], c = params_[2], w = params_[3];
      double e = std::exp(-(x - c) / w);
      double sig = 1.0 / (1.0 + e);
      double d1 = sig * (1.0 - sig) / w;
      if (order == 1) return (r - l) * d1;
      if (order == 2) return (r - l) * d1 * (1.0 - 2.0 * sig) / w;
      break;
    }
    default: break;
  }
  // Central differences for tabulated data and high orders.
  double h = 1e-4 * std::max(1.0, std::abs(x));
  if (order == 1) return (evaluate_base(x + h) - evaluate_base(x - h)) / (2 * h);
  if (order == 2)
    return (evaluate_base(x + h) - 2 * evaluate_base(x) + evaluate_base(x - h)) /
           (h * h);
  throw std::invalid_argument("derivative order > 2 not supported");
}

double CoefficientProfile::derivative(double x, int order) const {
  return derivative_base(x + shift_, order);
}

EllipticityBounds CoefficientProfile::ellipticity_bounds(Interval window) const {
  if (!domain().contains(window))
    throw std::domain_error("ellipticity window outside profile domain");
  Interval w{window.lo + shift_, window.hi + shift_};
  switch (kind_) {
    case ProfileKind::Uniform: return {params_[0], params_[0]};
    case ProfileKind::ExpDecay: {
      double r = params_[0];
      double a = std::exp(-r * w.lo), b = std::exp(-r * w.hi);
      return {std::min(a, b), std::max(a, b)};
    }
    case ProfileKind::Power:
      return {std::pow(w.lo, params_[0]), std::pow(w.hi, params_[0])};
    case ProfileKind::Periodic: {
      if (w.length() >= params_[2])
        return {params_[0] - std::abs(params_[1]), params_[0] + std::abs(params_[1])};
      break;  // shorter window: sampled below
    }
    case ProfileKind::RationalBump: {
      double far = std::max(std::abs(w.lo), std::abs(w.hi));
      double lo = params_[0] / (1.0 + far * far / (params_[1] * params_[1]));
      double hi = w.contains(0.0)
                      ? params_[0]
                      : std::max(evaluate_base(w.lo), evaluate_base(w.hi));
      return {lo, hi};
    }
    case ProfileKind::Blend: {
      double a = evaluate_base(w.lo), b = evaluate_base(w.hi);  // monotone
      return {std::min(a, b), std::max(a, b)};
    }
    case ProfileKind::MatrixDiag2D: {
      auto bp = child_p_->ellipticity_bounds({w.lo, w.hi});
      auto bq = child_q_->ellipticity_bounds({w.lo, w.hi});
      return {std::min(bp.lower, bq.lower), std::max(bp.upper, bq.upper)};
    }
    default: break;
  }
  // Dense sampling fallback (Tabulated, short periodic windows).
  const int n = 4096;
  double lo = kInf, hi = -kInf;
  for (int i = 0; i <= n; ++i) {
    double v = evaluate_base(w.lo + (w.hi - w.lo) * i / n);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

CoefficientProfile CoefficientProfile::translated(double c) const {
  CoefficientProfile p = *this;
  p.shift_ += c;
  return p;
}

void CoefficientProfile::declare_limits(std::vector<CoefficientProfile> limits) {
  declared_limits_ = std::move(limits);
}

std::vector<CoefficientProfile> CoefficientProfile::asymptotic_profiles() const {
  if (!declared_limits_.empty()) return declared_limits_;
  switch (kind_) {
    case ProfileKind::Uniform: return {*this};
    case ProfileKind::Periodic: {
      CoefficientProfile rep = *this;
      // Orbit representative with shift reduced into one period.
      rep.shift_ = std::fmod(rep.shift_, params_[2]);
      return {rep};
    }
    case ProfileKind::ExpDecay:
    case ProfileKind::RationalBump:
      return {uniform(0.0)};
    case ProfileKind::Power:
      return {};  // a(x) -> infinity: no bounded limit profile
    case ProfileKind::Blend:
      return {uniform(params_[0]), uniform(params_[1])};
    default:
      throw std::runtime_error(
          "asymptotic limits unknown for this profile; declare them explicitly");
  }
}

bool CoefficientProfile::same_asymptotic_class(const CoefficientProfile& o) const {
  if (kind_ != o.kind_ || params_ != o.params_) return false;
  if (kind_ == ProfileKind::Periodic) return true;  // translation orbit
  return shift_ == o.shift_ || kind_ == ProfileKind::Uniform;
}

std::string CoefficientProfile::tag() const {
  std::ostringstream os;
  os << to_string(kind_);
  os.precision(12);
  for (double p : params_) os << "_" << p;
  if (shift_ != 0.0) os << "_sh" << shift_;
  if (child_p_) os << "[" << child_p_->tag() << ";" << child_q_->tag() << "]";
  return os.str();
}

}  // namespace divform
