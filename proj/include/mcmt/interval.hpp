#pragma once
// Closed intervals on the real line (p-value intervals live in [0,1], the
// testing-threshold interval may have an infinite upper end) plus the
// running-intersection step used by every confidence sequence here.

#include <algorithm>
#include <cmath>

namespace mcmt {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  double width() const { return hi - lo; }
  bool degenerate() const { return lo == hi; }

  friend bool operator==(const Interval& a, const Interval& b) = default;
};

// Intersection made total: an empty overlap (possible only off the coverage
// event or through numeric noise) collapses to the point halfway across the
// gap between the two nearest endpoints, and `clamped` is flagged.
inline Interval intersect_clamped(const Interval& a, const Interval& b, bool* clamped = nullptr) {
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (r.lo > r.hi) {
    const double mid = 0.5 * (r.lo + r.hi);
    r = {mid, mid};
    if (clamped != nullptr) *clamped = true;
  }
  return r;
}

}  // namespace mcmt
