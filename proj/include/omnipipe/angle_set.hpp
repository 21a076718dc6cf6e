#pragma once

#include <vector>

namespace omnipipe {

/// Closed interval [lo, hi] of angles in degrees.
struct AngleInterval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  friend bool operator==(const AngleInterval&, const AngleInterval&) = default;
};

/// Free gap of a circular set: starts at `start` and extends `length` degrees
/// counter-clockwise, possibly across the wrap point.
struct AngleGap {
  double start = 0.0;
  double length = 0.0;
  double center(double period) const;
};

/// Union of closed arcs on a circle of the given period (degrees). Stored as
/// sorted, disjoint intervals inside [0, period]; an arc crossing the wrap
/// point is split in two.
class AngleIntervalSet {
 public:
  explicit AngleIntervalSet(double period = 360.0) : period_(period) {}

  double period() const { return period_; }
  const std::vector<AngleInterval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  bool full() const;

  /// Adds the arc from lo to hi (hi >= lo, any real values); arcs of length
  /// >= period cover the whole circle.
  void add(double lo, double hi);
  void add(const AngleIntervalSet& other);

  double measure() const;
  bool contains(double angle) const;
  /// True when every arc of `other` lies within this set (tolerance in degrees).
  bool covers(const AngleIntervalSet& other, double tol = 1e-9) const;

  /// Complement as circular gaps, ordered by start. A gap that wraps through
  /// the origin is reported once. Empty when full; a single full-length gap
  /// starting at 0 when empty.
  std::vector<AngleGap> gaps() const;

  /// Arcs merged across the wrap point, so an arc around 0 appears as one
  /// interval with lo < 0. Useful for reporting.
  std::vector<AngleInterval> merged_arcs() const;

 private:
  void insert(AngleInterval iv);

  double period_;
  std::vector<AngleInterval> intervals_;
};

}  // namespace omnipipe
