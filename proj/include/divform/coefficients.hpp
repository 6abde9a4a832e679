#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace divform {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool contains(const Interval& w) const { return w.lo >= lo && w.hi <= hi; }
};

enum class ProfileKind {
  Uniform,
  ExpDecay,
  Power,
  Periodic,
  RationalBump,
  Tabulated,
  MatrixDiag2D,
  Blend
};

std::string to_string(ProfileKind k);

struct EllipticityBounds {
  double lower = 0.0;  // 0 means not uniformly elliptic
  double upper = 0.0;  // infinity() means unbounded above
  bool uniformly_elliptic() const { return lower > 0.0; }
};

/// A coefficient field a(x), scalar in 1D or 2x2 symmetric positive in 2D.
/// Profiles are immutable; translate() returns a shifted copy evaluating
/// to a(x + c).
class CoefficientProfile {
 public:
  // Scalar families. Parameter meaning:
  //   Uniform:      {c}                    a(x) = c
  //   ExpDecay:     {rate}                 a(x) = exp(-rate*x)
  //   Power:        {alpha}, alpha in (0,2)  a(x) = x^alpha on (0,inf)
  //   Periodic:     {mean, amp, period}    a(x) = mean + amp*sin(2*pi*x/period)
  //   RationalBump: {scale, width}         a(x) = scale / (1 + (x/width)^2)
  static CoefficientProfile uniform(double c);
  static CoefficientProfile exp_decay(double rate);
  static CoefficientProfile power(double alpha);
  static CoefficientProfile periodic(double mean, double amp, double period);
  static CoefficientProfile rational_bump(double scale = 1.0, double width = 1.0);
  static CoefficientProfile tabulated(std::vector<double> xs, std::vector<double> ys);
  // Logistic blend of two constant levels: left as x -> -inf, right as x -> +inf.
  static CoefficientProfile blend(double left, double right, double center = 0.0,
                                  double width = 1.0);
  // a(x,y) = R(theta) diag(p(x), q(y)) R(theta)^T with scalar sub-profiles p, q.
  static CoefficientProfile matrix_diag2d(CoefficientProfile p, CoefficientProfile q,
                                          double theta = 0.0);

  ProfileKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  Interval domain() const;
  int smoothness() const { return smoothness_; }
  double shift() const { return shift_; }
  bool degenerate() const { return degenerate_; }

  double evaluate(double x) const;
  Eigen::Matrix2d evaluate(double x, double y) const;

  // Analytic derivative d^order a / dx^order where available (order <= 2).
  double derivative(double x, int order) const;

  EllipticityBounds ellipticity_bounds(Interval window) const;
  CoefficientProfile translated(double c) const;
  std::vector<CoefficientProfile> asymptotic_profiles() const;
  void declare_limits(std::vector<CoefficientProfile> limits);

  // Kind+parameter identity modulo translation orbit (Periodic ignores shift).
  bool same_asymptotic_class(const CoefficientProfile& other) const;

  std::string tag() const;

 private:
  CoefficientProfile(ProfileKind k, std::vector<double> p, Interval dom, int smooth);

  double evaluate_base(double x) const;  // without shift
  double derivative_base(double x, int order) const;

  ProfileKind kind_;
  std::vector<double> params_;
  Interval domain_;
  int smoothness_ = 0;
  double shift_ = 0.0;
  bool degenerate_ = false;

  // Tabulated: monotone-cubic interpolant data.
  std::vector<double> tab_x_, tab_y_, tab_m_;
  std::vector<CoefficientProfile> declared_limits_;

  // MatrixDiag2D children.
  std::shared_ptr<CoefficientProfile> child_p_, child_q_;
};

}  // namespace divform
