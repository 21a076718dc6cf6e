#pragma once

// Motion-singularity region of a T-junction turn.
//
// While the robot turns into a branch, its cross-section plane tilts by phi
// against the pipe's perpendicular section and cuts an ellipse with
// semi-minor b = D/2 and semi-major a = D / (2 cos phi), major axis in the
// turn plane. A module whose radial direction psi (measured from the major
// axis) meets the wall farther out than reach_max loses contact. With modules
// 120 deg apart this yields a set of forbidden robot roll angles theta5,
// periodic in 120 deg.
//
// Roll convention: theta5 is the roll of module 1 from the turning direction,
// and the turning direction is placed on the ellipse's minor axis, so module i
// sits at psi = theta5 + 90 + 120 * i (deg). Under this convention
// theta5 = 0 (module aligned with the turn) is the center of a free gap.

#include <optional>

#include "omnipipe/angle_set.hpp"
#include "omnipipe/kinematics.hpp"

namespace omnipipe {

inline constexpr double kTurnDirectionOnSectionDeg = 90.0;
inline constexpr double kOrientationPeriodDeg = 120.0;

struct EllipseSection {
  double semi_major_a = 0.0;  ///< mm, in the turn plane
  double semi_minor_b = 0.0;  ///< mm, D/2
  double tilt_angle_phi = 0.0;  ///< rad
};

/// a*b / sqrt(b^2 cos^2 psi + a^2 sin^2 psi); psi in rad from the major axis.
double ellipse_radial_distance(const EllipseSection& e, double psi);

/// Section of a pipe of inner diameter D cut at tilt phi (rad). Throws
/// InvalidSection for phi outside [0, pi/2).
EllipseSection cross_section_at(double diameter, double phi);

/// Closed arcs (deg, period 360) of section directions psi where the wall lies
/// beyond reach_max. Two arcs centered on the major-axis ends, or empty.
/// Throws InsufficientReach when reach_max < semi_minor_b.
AngleIntervalSet contact_loss_arcs(const EllipseSection& e, double reach_max);

/// Half-width (deg) of each contact-loss arc, or nullopt when reach covers the
/// whole section.
std::optional<double> contact_loss_half_width_deg(const EllipseSection& e, double reach_max);

struct SingularityRegion {
  /// Contact-loss directions on the section circle, deg in [0, 360).
  AngleIntervalSet forbidden_arcs{360.0};
  /// Forbidden theta5 values, deg modulo 120.
  AngleIntervalSet orientation_forbidden{kOrientationPeriodDeg};
  double sector_measure_deg = 0.0;
  /// Half of the free measure: (120 - sector) / 2.
  double free_margin_deg = kOrientationPeriodDeg / 2.0;
};

/// Projects contact-loss arcs onto robot roll: theta5 is forbidden when any
/// module direction falls inside an arc.
SingularityRegion orientation_forbidden_set(const AngleIntervalSet& arcs);

/// Default maximum cut tilt for a tee: the tilt at which the section's
/// major-axis vertex reaches the far edge of the branch mouth,
/// atan(D_branch / D_main). 45 deg for an equal-bore tee.
double default_tee_phi_max(double main_diameter, double branch_diameter);

/// Union of per-section forbidden sets over phi in [0, phi_max] sampled at
/// `steps` evenly spaced tilts (endpoints included).
SingularityRegion sweep_t_junction(double diameter, const RobotGeometry& geom, double phi_max,
                                   int steps);

/// True iff theta5 (rad) modulo 120 deg lies in the forbidden set.
bool in_singularity(double theta5, const SingularityRegion& region);

/// Smallest signed rotation (rad) that puts theta5 at the center of a free
/// gap. Ties go to the positive rotation. With an empty region the single gap
/// is centered on the preferred orientation theta5 = 0. Throws NoEscape when
/// every orientation is forbidden.
double escape_rotation(double theta5, const SingularityRegion& region);

/// sector / 120, clamped to [0, 1].
double failure_probability(const SingularityRegion& region);

/// Bisection on reach_max so that the swept sector equals target_sector_deg.
/// Sector measure is non-increasing in reach; the bracket is [D/2, D/(2 cos phi_max)].
double calibrate_reach_max(double diameter, double target_sector_deg, double phi_max,
                           int steps = 2, double tol_deg = 1e-9);

/// Forbidden-orientation measure (deg) estimated on a uniform theta5 grid of
/// `samples` points, evaluated with the SIMD contact kernel. Independent of
/// the analytic arc solution; used to cross-check reports.
double sampled_sector_measure(const EllipseSection& e, double reach_max, int samples);

}  // namespace omnipipe
