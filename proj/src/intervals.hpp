#pragma once

#include <vector>

namespace scf {

struct Interval {
  double start = 0.0;
  double end = 0.0;  // closed interval [start, end]
};

// Ordered list of disjoint closed intervals on the time axis.  Construction
// normalizes: zero/negative-length pieces are dropped, overlapping or
// touching pieces merge.  All ops are pure.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> raw);

  // empty set when end <= start
  static IntervalSet single(double start, double end);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  double measure() const;
  bool contains(double t) const;

  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet subtract(const IntervalSet& other) const;

 private:
  std::vector<Interval> parts_;  // sorted, disjoint, positive length
};

IntervalSet interval_union(const IntervalSet& a, const IntervalSet& b);
IntervalSet interval_intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet interval_subtract(const IntervalSet& a, const IntervalSet& b);
double measure(const IntervalSet& s);

}  // namespace scf
