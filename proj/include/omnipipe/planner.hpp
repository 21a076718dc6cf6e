#pragma once

// Open-loop mission planning: straight drive, elbow negotiation by speed
// ratios, and T-junction negotiation by holonomic alignment followed by
// differential turning.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omnipipe/kinematics.hpp"
#include "omnipipe/pipenet.hpp"
#include "omnipipe/singularity.hpp"

namespace omnipipe {

struct PlannerConfig {
  double straight_speed = 100.0;  ///< mm/s
  /// Turn onset for tees: head this fraction of D into the junction.
  double tee_trigger_fraction = 0.25;
  ElbowRatioMode elbow_mode = ElbowRatioMode::Generalized;
  double wobble_deadband = deg_to_rad(1.0);  ///< rad
  double holonomic_rate = 0.5;               ///< rad/s
  /// Emit holonomic rotations at all. Disabled reproduces a robot without
  /// in-place roll capability.
  bool with_holonomic = true;
  /// Rotate to the best orientation (theta5 = 0) before a tee turn even when
  /// the current orientation is already clear of the singularity region.
  bool align_tee = false;
  /// Scale on the rolling-without-slip module self-rotation coupling.
  double self_rotation_gain = 1.0;
  /// Cut-tilt sweep for tee regions. phi_max <= 0 selects the equal-bore
  /// default atan(D_branch / D_main).
  double tee_phi_max = 0.0;  ///< rad
  int tee_sweep_steps = 91;
  /// Clearance kept from the no-motion deadband edge when a rotation has to be
  /// stretched or shortened to avoid ending on it.
  double no_motion_clearance = deg_to_rad(0.1);

  /// Throws ValidationError naming the offending field.
  void validate() const;
  double resolved_tee_phi_max() const;
};

enum class StepKind { Drive, HolonomicRotate, TurnElbow, TurnTee };
enum class Completion {
  Duration,      ///< run for duration_s
  SegmentEnd,    ///< run until the end of `segment`
  TriggerPoint,  ///< run until target_s into `segment`
};

struct Trigger {
  enum class Kind { Immediate, HeadReachesFractionOfD };
  Kind kind = Kind::Immediate;
  double fraction = 0.0;
  friend bool operator==(const Trigger&, const Trigger&) = default;
};

const char* to_string(StepKind kind);
const char* to_string(Completion completion);

struct MissionStep {
  StepKind kind = StepKind::Drive;
  std::size_t segment = 0;
  CommandVector command;
  /// Nominal duration; exact for Duration steps, the planned value otherwise.
  double duration_s = 0.0;
  Completion completion = Completion::Duration;
  double target_s = 0.0;  ///< mm into `segment`, for SegmentEnd/TriggerPoint
  Trigger trigger;
  /// Intended module translation speeds (mm/s) after drive-sign correction.
  std::array<double, 3> module_speeds{};
  /// HolonomicRotate: signed roll change (rad).
  double rotation = 0.0;
  /// Roll relative to the segment's turn direction before/after the step (rad).
  double theta5_before = 0.0;
  double theta5_after = 0.0;
  /// Module self-rotation after the step (rad) and the drive sign it implies.
  double module_rotation_after = 0.0;
  int drive_sign_after = 1;
  bool crosses_no_motion_line = false;
  bool crosses_half_turn = false;

  bool empty() const { return duration_s == 0.0; }
  friend bool operator==(const MissionStep&, const MissionStep&) = default;
};

using Plan = std::vector<MissionStep>;

/// Running state threaded through consecutive planning calls.
struct PlanContext {
  std::size_t segment = 0;
  /// Robot roll in the network's transported frame (rad).
  double roll = 0.0;
  /// Cumulative module self-rotation (rad).
  double module_rotation = 0.0;
};

/// Equal drive rates v/r for `length` mm at straight_speed; theta_dot_4 = 0.
/// Throws ValidationError for non-positive length.
MissionStep plan_straight(double length, const PlannerConfig& cfg, const RobotGeometry& geom);
MissionStep plan_straight(double length, const PlannerConfig& cfg, const RobotGeometry& geom,
                          const PlanContext& ctx);

/// Roll of `delta` rad (normalized into (-60, 60] deg) at `rate` rad/s:
/// command (0, 0, 0, +-rate) for |delta| / rate seconds. Zero delta gives an
/// empty step. `alpha_before` and `alpha_per_roll` let the step report
/// hazards: passing the no-motion line or a half turn of module self-rotation.
MissionStep holonomic_rotate_step(double delta, double rate, double alpha_before = 0.0,
                                  double alpha_per_roll = 0.0, double deadband = deg_to_rad(1.0));

/// Optional roll to the nearest single-innermost-module pose, then the turn
/// with V_i proportional to the module path radii and mean speed straight_speed.
std::vector<MissionStep> plan_elbow(const PipeSegment& elbow, double theta5,
                                    const PlannerConfig& cfg, const RobotGeometry& geom);
std::vector<MissionStep> plan_elbow(const PipeSegment& elbow, const PlannerConfig& cfg,
                                    const RobotGeometry& geom, PlanContext& ctx);

/// Branch exit: escape roll when singular (or alignment when requested), drive
/// to the trigger point, then turn with the inner module slowed or reversed.
/// Through exit: roll so modules flank the branch mouth, then drive across.
/// Throws NoEscape when the region leaves no free orientation.
std::vector<MissionStep> plan_tee(const PipeSegment& tee, double theta5,
                                  const SingularityRegion& region, const PlannerConfig& cfg,
                                  const RobotGeometry& geom);
std::vector<MissionStep> plan_tee(const PipeSegment& tee, const SingularityRegion& region,
                                  const PlannerConfig& cfg, const RobotGeometry& geom,
                                  PlanContext& ctx);

/// Command for a tee turn: v_cz = straight_speed and a bending rate whose
/// curvature radius (|V1| + |V2| + |V3|) / (3 |omega|) equals the tee's
/// equivalent radius, bending towards the turn direction seen from roll
/// theta5. Throws PlanError when that radius is tighter than the robot can
/// produce.
CommandVector tee_turn_command(const PipeSegment& tee, double theta5, const PlannerConfig& cfg,
                               const RobotGeometry& geom);

/// Singularity regions for every branch-exit tee of the network, keyed by
/// segment index.
std::map<std::size_t, SingularityRegion> tee_regions(const PipeNetwork& net,
                                                     const RobotGeometry& geom,
                                                     const PlannerConfig& cfg);

/// Whole-network plan from an initial roll (rad).
Plan plan_mission(const PipeNetwork& net, double initial_roll, const PlannerConfig& cfg,
                  const RobotGeometry& geom);
Plan plan_mission(const PipeNetwork& net, double initial_roll, const PlannerConfig& cfg,
                  const RobotGeometry& geom,
                  const std::map<std::size_t, SingularityRegion>& regions);

}  // namespace omnipipe
