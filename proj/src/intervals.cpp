#include "intervals.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace scf {

IntervalSet::IntervalSet(std::vector<Interval> raw) {
  for (const auto& iv : raw) {
    if (std::isnan(iv.start) || std::isnan(iv.end))
      fail(errc::invalid_argument, "IntervalSet: NaN endpoint");
  }
  std::erase_if(raw, [](const Interval& iv) { return !(iv.end > iv.start); });
  std::sort(raw.begin(), raw.end(),
            [](const Interval& a, const Interval& b) { return a.start < b.start; });
  for (const auto& iv : raw) {
    if (!parts_.empty() && iv.start <= parts_.back().end) {
      parts_.back().end = std::max(parts_.back().end, iv.end);
    } else {
      parts_.push_back(iv);
    }
  }
}

IntervalSet IntervalSet::single(double start, double end) {
  IntervalSet s;
  if (end > start) s.parts_.push_back({start, end});
  return s;
}

double IntervalSet::measure() const {
  double total = 0.0;
  for (const auto& iv : parts_) total += iv.end - iv.start;
  return total;
}

bool IntervalSet::contains(double t) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), t,
                             [](double v, const Interval& iv) { return v < iv.start; });
  if (it == parts_.begin()) return false;
  --it;
  return t <= it->end;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  size_t i = 0, j = 0;
  while (i < parts_.size() && j < other.parts_.size()) {
    const double lo = std::max(parts_[i].start, other.parts_[j].start);
    const double hi = std::min(parts_[i].end, other.parts_[j].end);
    if (hi > lo) out.push_back({lo, hi});
    if (parts_[i].end < other.parts_[j].end)
      ++i;
    else
      ++j;
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
  std::vector<Interval> out;
  for (const auto& iv : parts_) {
    double cursor = iv.start;
    for (const auto& cut : other.parts_) {
      if (cut.end <= cursor) continue;
      if (cut.start >= iv.end) break;
      if (cut.start > cursor) out.push_back({cursor, cut.start});
      cursor = std::max(cursor, cut.end);
      if (cursor >= iv.end) break;
    }
    if (cursor < iv.end) out.push_back({cursor, iv.end});
  }
  return IntervalSet(std::move(out));
}

IntervalSet interval_union(const IntervalSet& a, const IntervalSet& b) { return a.unite(b); }
IntervalSet interval_intersect(const IntervalSet& a, const IntervalSet& b) { return a.intersect(b); }
IntervalSet interval_subtract(const IntervalSet& a, const IntervalSet& b) { return a.subtract(b); }
double measure(const IntervalSet& s) { return s.measure(); }

}  // namespace scf
