#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's solvers; each oracle works from first principles.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;
inline double deg(double rad) { return rad * 180.0 / kPi; }
inline double rad(double deg) { return deg * kPi / 180.0; }

// Twist from drive rates by composing per-module rotations. A module moving
// forward at V tilts the robot about the line through the other two modules,
// at distance a + l, so omega_i = -(V_i / (a + l)) * (z x u_i), with u_i the
// module's radial direction at 0, -120, +120 deg.
inline std::array<double, 4> twist(const std::array<double, 4>& cmd, double r, double l, double a) {
  const double dirs[3] = {0.0, rad(-120.0), rad(120.0)};
  double wx = 0.0;
  double wy = 0.0;
  double vz = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double v = r * cmd[i];
    const double ux = std::cos(dirs[i]);
    const double uy = std::sin(dirs[i]);
    // z x u = (-uy, ux)
    wx += -(v / (a + l)) * (-uy);
    wy += -(v / (a + l)) * ux;
    vz += v;
  }
  return {wx, wy, cmd[3], vz / 3.0};
}

// Center velocity from module velocities V_i z + w z x p_i, p_i at arm l_i and
// angle 0, 120, 240 deg, averaged.
inline std::array<double, 3> center_velocity(const std::array<double, 3>& v,
                                             const std::array<double, 3>& arms, double wz) {
  std::array<double, 3> sum{};
  for (int i = 0; i < 3; ++i) {
    const double ang = rad(120.0 * i);
    const double px = arms[i] * std::cos(ang);
    const double py = arms[i] * std::sin(ang);
    // (0, 0, wz) x (px, py, 0) = (-wz py, wz px, 0)
    sum[0] += -wz * py;
    sum[1] += wz * px;
    sum[2] += v[i];
  }
  return {sum[0] / 3.0, sum[1] / 3.0, sum[2] / 3.0};
}

inline double ellipse_radius(double a, double b, double psi) {
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  return a * b / std::sqrt(b * b * c * c + a * a * s * s);
}

// Half-width (deg) of the contact-loss arc about psi = 0, found by dense
// sampling of [0, 90] deg: the last sample still beyond reach. Returns -1 when
// no sample is beyond reach.
inline double sampled_half_width_deg(double a, double b, double reach, long samples) {
  double last = -1.0;
  for (long k = 0; k <= samples; ++k) {
    const double psi_deg = 90.0 * static_cast<double>(k) / static_cast<double>(samples);
    if (ellipse_radius(a, b, rad(psi_deg)) > reach) {
      last = psi_deg;
    } else {
      break;
    }
  }
  return last;
}

// Forbidden theta5 membership by direct geometry: some module at
// psi = theta5 + 90 + 120 i deg meets the wall beyond reach in any of the
// sampled sections.
inline bool forbidden(double theta5_deg, const std::vector<std::pair<double, double>>& sections,
                      double reach) {
  for (const auto& [a, b] : sections) {
    for (int i = 0; i < 3; ++i) {
      if (ellipse_radius(a, b, rad(theta5_deg + 90.0 + 120.0 * i)) > reach) return true;
    }
  }
  return false;
}

// Free runs of a boolean grid over [0, period) with wrap, as (start, length)
// in grid cells.
inline std::vector<std::pair<long, long>> free_runs(const std::vector<bool>& blocked) {
  const long n = static_cast<long>(blocked.size());
  std::vector<std::pair<long, long>> runs;
  long first_blocked = -1;
  for (long i = 0; i < n; ++i) {
    if (blocked[i]) {
      first_blocked = i;
      break;
    }
  }
  if (first_blocked < 0) return {{0, n}};
  long start = -1;
  for (long k = 1; k <= n; ++k) {
    const long i = (first_blocked + k) % n;
    if (!blocked[i] && start < 0) start = first_blocked + k;
    if (blocked[i] && start >= 0) {
      runs.emplace_back(start % n, first_blocked + k - start);
      start = -1;
    }
  }
  return runs;
}

}  // namespace oracle
