#pragma once

#include <cmath>
#include <numbers>

namespace omnipipe {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Reduces x into [0, period).
inline double wrap_positive(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  // fmod of a tiny negative value can round up to exactly `period`.
  if (r >= period) r -= period;
  return r;
}

/// Reduces x into (-period/2, period/2].
inline double wrap_signed(double x, double period) {
  double r = wrap_positive(x, period);
  if (r > 0.5 * period) r -= period;
  return r;
}

}  // namespace omnipipe
