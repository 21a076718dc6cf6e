#include "omnipipe/drive.hpp"

#include <algorithm>
#include <cmath>

#include "omnipipe/angles.hpp"
#include "omnipipe/error.hpp"

namespace omnipipe {
namespace {

// Whether some offset + k * period lies in the closed range between from
// and to.
bool crosses_lattice(double from, double to, double offset, double period) {
  const double lo = std::min(from, to);
  const double hi = std::max(from, to);
  const double k = std::ceil((lo - offset) / period);
  return offset + k * period <= hi;
}

}  // namespace

bool on_no_motion_line(double alpha, double deadband) {
  const double folded = wrap_positive(alpha, kPi);
  return std::abs(folded - kPi / 2.0) <= deadband;
}

int drive_sign(double alpha, double deadband) {
  if (!(deadband >= 0.0 && deadband <= deg_to_rad(10.0))) {
    throw ValidationError("deadband", "must lie in [0, 10] deg");
  }
  if (on_no_motion_line(alpha, deadband)) return 0;
  return std::cos(alpha) > 0.0 ? 1 : -1;
}

double module_rotation_per_roll(double pipe_diameter, const RobotGeometry& geom, double gain) {
  return -gain * (pipe_diameter / 2.0) / geom.module_outer_radius;
}

double module_self_rotation_rate(double theta_dot_4, double pipe_diameter,
                                 const RobotGeometry& geom, double gain) {
  return module_rotation_per_roll(pipe_diameter, geom, gain) * theta_dot_4;
}

bool crosses_no_motion_line(double from, double to) {
  if (from == to) return false;
  return crosses_lattice(from, to, kPi / 2.0, kPi);
}

bool crosses_half_turn(double from, double to) {
  if (from == to) return false;
  const double lo = std::min(from, to);
  const double hi = std::max(from, to);
  for (double k = std::ceil(lo / kPi); k * kPi <= hi; k += 1.0) {
    if (k != 0.0 && k * kPi != from) return true;
  }
  return false;
}

}  // namespace omnipipe
