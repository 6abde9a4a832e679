#pragma once

#include <string>
#include <vector>

#include "divform/coefficients.hpp"

namespace divform {

struct EvidenceRecord {
  double domain_half_width = 0.0;  // L
  std::string boundary;
  int cluster_size = 0;
};

/// Disjoint sorted closed intervals plus the per-interval evidence that
/// produced them.
struct SpectrumEstimate {
  std::vector<Interval> intervals;
  std::vector<std::vector<EvidenceRecord>> evidence;
  std::vector<bool> inconclusive;
};

/// Merge overlapping/adjacent intervals (gap <= glue) into a disjoint
/// sorted list.
std::vector<Interval> merge_intervals(std::vector<Interval> v, double glue = 0.0);

/// Intersection of two disjoint sorted interval lists.
std::vector<Interval> intersect_intervals(const std::vector<Interval>& a,
                                          const std::vector<Interval>& b);

/// Hausdorff distance between two finite unions of closed intervals.
/// Empty vs non-empty is +infinity; empty vs empty is 0.
double hausdorff_distance(const std::vector<Interval>& a,
                          const std::vector<Interval>& b);

/// Group sorted values into clusters split at gaps exceeding
/// gap_factor * (local mean spacing); returns [min,max] per cluster.
std::vector<Interval> cluster_intervals(const std::vector<double>& sorted_values,
                                        double gap_factor, double min_gap = 0.0);

}  // namespace divform
