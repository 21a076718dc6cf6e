#include "omnipipe/angle_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "omnipipe/angles.hpp"

namespace omnipipe {

double AngleGap::center(double period) const { return wrap_positive(start + 0.5 * length, period); }

bool AngleIntervalSet::full() const {
  return intervals_.size() == 1 && intervals_[0].lo <= 0.0 && intervals_[0].hi >= period_;
}

void AngleIntervalSet::add(double lo, double hi) {
  if (!(hi >= lo)) throw std::invalid_argument("AngleIntervalSet::add: hi < lo");
  if (hi - lo >= period_) {
    intervals_ = {{0.0, period_}};
    return;
  }
  const double start = wrap_positive(lo, period_);
  const double end = start + (hi - lo);
  if (end <= period_) {
    insert({start, end});
  } else {
    insert({start, period_});
    insert({0.0, end - period_});
  }
}

void AngleIntervalSet::add(const AngleIntervalSet& other) {
  if (other.period_ != period_) throw std::invalid_argument("AngleIntervalSet: period mismatch");
  for (const auto& iv : other.intervals_) insert(iv);
}

void AngleIntervalSet::insert(AngleInterval iv) {
  intervals_.push_back(iv);
  std::sort(intervals_.begin(), intervals_.end(),
            [](const AngleInterval& a, const AngleInterval& b) { return a.lo < b.lo; });
  std::vector<AngleInterval> merged;
  for (const auto& cur : intervals_) {
    if (!merged.empty() && cur.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, cur.hi);
    } else {
      merged.push_back(cur);
    }
  }
  intervals_ = std::move(merged);
}

double AngleIntervalSet::measure() const {
  double m = 0.0;
  for (const auto& iv : intervals_) m += iv.length();
  return std::min(m, period_);
}

bool AngleIntervalSet::contains(double angle) const {
  const double x = wrap_positive(angle, period_);
  for (const auto& iv : intervals_) {
    if (x >= iv.lo && x <= iv.hi) return true;
  }
  // x == 0 is the same point as x == period.
  return x == 0.0 && !intervals_.empty() && intervals_.back().hi >= period_;
}

bool AngleIntervalSet::covers(const AngleIntervalSet& other, double tol) const {
  for (const auto& o : other.intervals_) {
    bool inside = false;
    for (const auto& iv : intervals_) {
      if (o.lo >= iv.lo - tol && o.hi <= iv.hi + tol) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
  }
  return true;
}

std::vector<AngleGap> AngleIntervalSet::gaps() const {
  if (intervals_.empty()) return {{0.0, period_}};
  if (full()) return {};
  std::vector<AngleGap> out;
  for (std::size_t i = 0; i + 1 < intervals_.size(); ++i) {
    const double len = intervals_[i + 1].lo - intervals_[i].hi;
    if (len > 0.0) out.push_back({intervals_[i].hi, len});
  }
  // Gap from the last arc's end around through the origin to the first arc.
  const double wrap_len = (period_ - intervals_.back().hi) + intervals_.front().lo;
  if (wrap_len > 0.0) {
    out.push_back({wrap_positive(intervals_.back().hi, period_), wrap_len});
  }
  std::sort(out.begin(), out.end(),
            [](const AngleGap& a, const AngleGap& b) { return a.start < b.start; });
  return out;
}

std::vector<AngleInterval> AngleIntervalSet::merged_arcs() const {
  std::vector<AngleInterval> out = intervals_;
  if (out.size() >= 2 && out.front().lo <= 0.0 && out.back().hi >= period_) {
    out.front().lo = out.back().lo - period_;
    out.pop_back();
  }
  return out;
}

}  // namespace omnipipe
