#pragma once

namespace skf {

// Open coordinate interval; domains are products of these.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x > lo && x < hi; }
};

}  // namespace skf
