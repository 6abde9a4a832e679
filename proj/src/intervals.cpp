#include "divform/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace divform {

std::vector<Interval> merge_intervals(std::vector<Interval> v, double glue) {
  if (v.empty()) return v;
  std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
  std::vector<Interval> out{v[0]};
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i].lo <= out.back().hi + glue)
      out.back().hi = std::max(out.back().hi, v[i].hi);
    else
      out.push_back(v[i]);
  }
  return out;
}

std::vector<Interval> intersect_intervals(const std::vector<Interval>& a,
                                          const std::vector<Interval>& b) {
  std::vector<Interval> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      double lo = std::max(x.lo, y.lo), hi = std::min(x.hi, y.hi);
      if (lo <= hi) out.push_back({lo, hi});
    }
  return merge_intervals(std::move(out));
}

namespace {
double dist_to_union(double x, const std::vector<Interval>& v) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& iv : v) {
    if (x >= iv.lo && x <= iv.hi) return 0.0;
    d = std::min(d, std::min(std::abs(x - iv.lo), std::abs(x - iv.hi)));
  }
  return d;
}

double directed_hausdorff(const std::vector<Interval>& a,
                          const std::vector<Interval>& b) {
  // sup over points of a of dist to b; extrema occur at endpoints of a
  // or at gap midpoints of b that lie inside a.
  double d = 0.0;
  for (const auto& iv : a) {
    d = std::max(d, dist_to_union(iv.lo, b));
    d = std::max(d, dist_to_union(iv.hi, b));
  }
  std::vector<double> probes;
  for (size_t i = 0; i + 1 < b.size(); ++i)
    probes.push_back(0.5 * (b[i].hi + b[i + 1].lo));
  if (!b.empty()) {
    probes.push_back(b.front().lo);
    probes.push_back(b.back().hi);
  }
  for (double p : probes)
    for (const auto& iv : a)
      if (p >= iv.lo && p <= iv.hi) d = std::max(d, dist_to_union(p, b));
  return d;
}
}  // namespace

double hausdorff_distance(const std::vector<Interval>& a,
                          const std::vector<Interval>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

std::vector<Interval> cluster_intervals(const std::vector<double>& vals,
                                        double gap_factor, double min_gap) {
  std::vector<Interval> out;
  if (vals.empty()) return out;
  const int n = static_cast<int>(vals.size());
  const int w = 5;  // half-window for the local mean spacing
  Interval cur{vals[0], vals[0]};
  for (int i = 1; i < n; ++i) {
    int lo = std::max(0, i - w), hi = std::min(n - 1, i + w);
    double local = (vals[hi] - vals[lo]) / std::max(1, hi - lo);
    double gap = vals[i] - vals[i - 1];
    if (gap > std::max(gap_factor * local, min_gap)) {
      out.push_back(cur);
      cur = {vals[i], vals[i]};
    } else {
      cur.hi = vals[i];
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace divform
