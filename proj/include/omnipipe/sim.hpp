#pragma once

// Deterministic kinematic simulator.
//
// Pose is intrinsic: segment index, arc length s into it, roll in the
// network's transported frame, and the three module self-rotations. Commands
// are piecewise constant, so explicit Euler integration is exact per piece.

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "omnipipe/kinematics.hpp"
#include "omnipipe/pipenet.hpp"
#include "omnipipe/planner.hpp"
#include "omnipipe/singularity.hpp"

namespace omnipipe {

struct SimConfig {
  double dt = 0.01;  ///< s
  double wobble_deadband = deg_to_rad(1.0);
  double self_rotation_gain = 1.0;
  bool record = true;
  /// Upper bound on integration steps per mission step; guards against plans
  /// whose completion predicate can never hold.
  long max_substeps = 10'000'000;

  void validate() const;
};

struct SimState {
  std::size_t segment = 0;
  double s = 0.0;     ///< mm into `segment`
  double roll = 0.0;  ///< rad, transported network frame, unbounded
  std::array<double, 3> module_rotation{};  ///< rad, unbounded
  double time = 0.0;  ///< s

  /// Roll relative to the turn direction of the current segment, or of the
  /// next turning segment when the current one is straight; in [0, 2 pi).
  double theta5(const PipeNetwork& net) const;
};

struct TrajectoryRecord {
  double time = 0.0;
  std::size_t segment = 0;
  double s = 0.0;
  double theta5 = 0.0;  ///< rad, in [0, 2 pi)
  CommandVector command;
  TwistVector twist;
  std::array<int, 3> drive_signs{1, 1, 1};
  bool singular = false;
  std::string event;
};

struct StepResult {
  SimState state;
  TrajectoryRecord record;
};

/// One Euler step of length dt. Drive rates are multiplied by the drive sign
/// of their module before forward kinematics. Crossing a segment end moves to
/// the next segment; running off the final end clamps s and tags the record
/// "end_of_network" (likewise "start_of_network" when reversing past s = 0).
StepResult step(const SimState& state, const CommandVector& cmd, double dt,
                const PipeNetwork& net, const RobotGeometry& geom, const SimConfig& cfg);

enum class Outcome { Success, FailureSingularity, Stalled, Incomplete };
const char* to_string(Outcome outcome);

struct SimResult {
  Outcome outcome = Outcome::Incomplete;
  std::string message;
  SimState final_state;
  /// Index into the plan of the step that ended the run early, else plan size.
  std::size_t failed_step = 0;
  bool mid_turn_violation = false;
  std::vector<TrajectoryRecord> trajectory;
};

/// Runs the plan step by step. Tee turns check the singularity predicate at
/// onset (terminal failure) and after each substep (reported as a
/// "mid_turn_singularity" event). A translation step whose axial speed is not
/// positive ends the run as Stalled. Throws PlanError for malformed plans.
SimResult run_mission(const PipeNetwork& net, const Plan& plan, const SimConfig& cfg,
                      const RobotGeometry& geom,
                      const std::map<std::size_t, SingularityRegion>& regions,
                      double initial_roll);

/// Convenience: computes the tee regions with the planner's sweep settings.
SimResult run_mission(const PipeNetwork& net, const Plan& plan, const SimConfig& cfg,
                      const RobotGeometry& geom, const PlannerConfig& pcfg,
                      double initial_roll);

/// Trajectory CSV with a fixed header; numbers in shortest round-trip form,
/// angles in degrees.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records);

inline constexpr const char* kTrajectoryCsvHeader =
    "time_s,segment,s_mm,theta5_deg,th1,th2,th3,th4,wx,wy,wz,vcz,sign1,sign2,sign3,singular,event";

}  // namespace omnipipe
