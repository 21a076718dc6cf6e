#pragma once

// Closed-form differential kinematics of the three-module wall-press robot.
//
// Units are fixed throughout: lengths in mm, angles in rad, time in s.
// Robot frame: z along the pipe (direction of travel), x towards module 1.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace omnipipe {

using Vec3 = Eigen::Vector3d;

/// Module-center reach (mm) that reproduces the 96.54 deg T-junction
/// singularity sector in a 160 mm equal-bore tee. Recovered by bisection;
/// see singularity::calibrate_reach_max.
inline constexpr double kCalibratedReachMaxMm = 104.72112946686072;

/// Physical constants of the robot. All lengths in mm.
struct RobotGeometry {
  double lug_radius = 15.0;
  /// Nominal distance of a module center from the robot center.
  double arm_length = 60.0;
  /// Perpendicular distance from the robot center to the line joining the
  /// other two modules.
  double a_offset = 30.0;
  double reach_min = 50.0;
  double reach_max = kCalibratedReachMaxMm;
  double module_outer_radius = 20.0;

  /// Geometry with a_offset = l/2 (modules on an equilateral triangle).
  static RobotGeometry symmetric(double lug_radius, double arm_length);

  /// Throws InvalidGeometry naming the first violated invariant.
  void validate() const;
};

/// Motor-space input: three drive rates and the holonomic roll rate (rad/s).
struct CommandVector {
  double theta_dot_1 = 0.0;
  double theta_dot_2 = 0.0;
  double theta_dot_3 = 0.0;
  double theta_dot_4 = 0.0;

  std::array<double, 4> as_array() const {
    return {theta_dot_1, theta_dot_2, theta_dot_3, theta_dot_4};
  }
  static CommandVector from_array(const std::array<double, 4>& v) {
    return {v[0], v[1], v[2], v[3]};
  }
  bool finite() const;
  friend bool operator==(const CommandVector&, const CommandVector&) = default;
};

/// Robot output: angular velocity in the robot frame (rad/s) and the axial
/// speed of the robot center (mm/s).
struct TwistVector {
  double omega_x = 0.0;
  double omega_y = 0.0;
  double omega_z = 0.0;
  double v_cz = 0.0;

  std::array<double, 4> as_array() const { return {omega_x, omega_y, omega_z, v_cz}; }
  static TwistVector from_array(const std::array<double, 4>& v) {
    return {v[0], v[1], v[2], v[3]};
  }
  bool finite() const;
  friend bool operator==(const TwistVector&, const TwistVector&) = default;
};

/// Module translation speeds (mm/s) and instantaneous arm extensions (mm).
struct ModuleVelocities {
  std::array<double, 3> v{};
  std::array<double, 3> arm{};
};

/// V_i = r * theta_dot_i; arms set to the nominal length.
ModuleVelocities module_linear_velocities(const CommandVector& cmd, const RobotGeometry& geom);

/// Re-expresses a vector from the rotating robot frame in the co-located
/// non-rotating frame: vec + (theta_dot_4 z) x position.
Vec3 coriolis_transform(const Vec3& vec_in_rotating_frame, const Vec3& position_of_point,
                        double theta_dot_4);

/// Radial position of module i (0-based) for the Coriolis average: modules at
/// 0, 120 and 240 deg counter-clockwise from x, at the given arm length.
Vec3 coriolis_module_position(int module, double arm_length);

/// Mean of the three Coriolis-transformed module velocities. Arm lengths may
/// differ; with equal arms the planar part vanishes.
Vec3 center_velocity(const ModuleVelocities& mv, double theta_dot_4);

/// The 4x4 Jacobian mapping (theta_dot_1..4) to (omega_x, omega_y, omega_z, v_cz).
/// Built entry by entry from the per-module angular-velocity contributions;
/// with a_offset = l/2 it is the familiar closed form with sqrt(3) r / 3l terms.
Eigen::Matrix4d jacobian(const RobotGeometry& geom);

TwistVector forward_kinematics(const CommandVector& cmd, const RobotGeometry& geom);

/// Batched forward map. Runs on the best SIMD kernel the CPU offers; results
/// are bit-identical to forward_kinematics.
std::vector<TwistVector> forward_kinematics_batch(std::span<const CommandVector> cmds,
                                                  const RobotGeometry& geom);

/// Throws InvalidGeometry when r or l is zero (singular Jacobian).
CommandVector inverse_kinematics(const TwistVector& twist, const RobotGeometry& geom);

/// Instantaneous radius of curvature of the center path.
class CurvatureRadius {
 public:
  enum class Kind { Finite, Infinite, Undefined };

  static CurvatureRadius finite(double mm) { return {Kind::Finite, mm}; }
  static CurvatureRadius infinite();
  static CurvatureRadius undefined();

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }
  bool is_undefined() const { return kind_ == Kind::Undefined; }
  /// mm; +inf when Infinite, NaN when Undefined.
  double value() const { return value_; }

 private:
  CurvatureRadius(Kind k, double v) : kind_(k), value_(v) {}
  Kind kind_;
  double value_;
};

/// Angular-speed norm below which the robot is taken to drive straight (rad/s).
inline constexpr double kStraightOmegaTolerance = 1e-12;

/// R = (|V1| + |V2| + |V3|) / (3 |omega|).
CurvatureRadius radius_of_curvature(const ModuleVelocities& mv, const TwistVector& twist);

}  // namespace omnipipe
