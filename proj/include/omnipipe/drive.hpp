#pragma once

// Crawler drive-sign model.
//
// A module's crawler chain runs in opposite directions on its upper and lower
// runs. Once the module has rotated about its own axis past a quarter turn the
// run touching the wall is the one moving backwards, so a positive motor rate
// drives the robot in reverse; at exactly a quarter turn (the no-motion line)
// both runs touch and the robot only wobbles.

#include "omnipipe/kinematics.hpp"

namespace omnipipe {

/// -1, 0 or +1. Zero when the module rotation alpha (rad) lies within
/// `deadband` (rad, in [0, 10 deg]) of a no-motion line 90 + 180k deg,
/// otherwise sign(cos alpha).
int drive_sign(double alpha, double deadband);

/// Whether alpha lies within `deadband` of a no-motion line.
bool on_no_motion_line(double alpha, double deadband);

/// Module self-rotation rate (rad/s) produced by a holonomic roll rate
/// theta_dot_4, assuming the circular module cross-section rolls on the pipe
/// wall without slip: -gain * theta_dot_4 * (D/2) / module_outer_radius.
double module_self_rotation_rate(double theta_dot_4, double pipe_diameter,
                                 const RobotGeometry& geom, double gain = 1.0);

/// Module self-rotation per unit of robot roll, d(alpha)/d(theta5).
double module_rotation_per_roll(double pipe_diameter, const RobotGeometry& geom,
                                double gain = 1.0);

/// True when moving alpha from `from` to `to` passes through a no-motion
/// line (or ends on one).
bool crosses_no_motion_line(double from, double to);

/// True when moving alpha from `from` to `to` passes a half turn 180k deg,
/// with k != 0, other than the start point itself.
bool crosses_half_turn(double from, double to);

}  // namespace omnipipe
