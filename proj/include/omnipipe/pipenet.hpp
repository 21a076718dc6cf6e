#pragma once

// Pipe networks as ordered segment lists with an arc-length parameterized
// centerline.
//
// Frames are parallel-transported along the centerline. A frame's columns are
// (x: roll reference, y, z: tangent). Roll angles of turns (elbow turn plane,
// tee branch direction) are measured about the tangent from the local x axis,
// and the robot roll theta5 for a turn is the roll of module 1 measured from
// that turn direction; for an elbow the turn direction is the inner side of
// the bend.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Geometry>
#include <json.hpp>

#include "omnipipe/angles.hpp"
#include "omnipipe/kinematics.hpp"

namespace omnipipe {

enum class SegmentKind { Straight, Elbow, Tee };
enum class TeeExit { Through, Branch };

const char* to_string(SegmentKind kind);
const char* to_string(TeeExit exit);

struct PipeSegment {
  SegmentKind kind = SegmentKind::Straight;
  double diameter = 160.0;  ///< inner diameter D, mm
  double length = 0.0;      ///< straights only, mm
  double bend_radius = 0.0;  ///< elbows: centerline bend radius, mm
  double bend_angle = 0.0;   ///< elbows, rad, in (0, pi]
  double turn_plane_roll = 0.0;  ///< elbows, rad
  double branch_roll = 0.0;      ///< tees, rad
  TeeExit exit = TeeExit::Branch;
  /// Tees: radius of the 90 deg arc joining main and branch axes. 0 = D/2.
  double equivalent_radius = 0.0;

  static PipeSegment straight(double diameter, double length);
  static PipeSegment elbow(double diameter, double bend_radius, double bend_angle,
                           double turn_plane_roll = 0.0);
  static PipeSegment tee(double diameter, TeeExit exit, double branch_roll = 0.0,
                         double equivalent_radius = 0.0);

  /// Arc length of the centerline through this segment (mm).
  double centerline_length() const;
  /// Whether the centerline bends (elbow, or tee left through the branch).
  bool bends() const;
  /// Bend radius of the centerline (mm); 0 for straight runs.
  double centerline_radius() const;
  /// Total bend (rad); 0 for straight runs.
  double centerline_bend() const;
  /// Roll of the turn direction (rad): turn plane for elbows, branch for tees.
  double turn_roll() const;

  friend bool operator==(const PipeSegment&, const PipeSegment&) = default;
};

struct Frame {
  Vec3 origin = Vec3::Zero();
  Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();
  Vec3 tangent() const { return orientation.col(2); }
  Vec3 roll_reference() const { return orientation.col(0); }
};

class PipeNetwork {
 public:
  PipeNetwork() = default;
  /// Validates and precomputes segment start frames. Throws ValidationError.
  explicit PipeNetwork(std::vector<PipeSegment> segments);

  const std::vector<PipeSegment>& segments() const { return segments_; }
  const PipeSegment& segment(std::size_t index) const;
  std::size_t size() const { return segments_.size(); }

  double total_length() const;

  /// Centerline frame at arc length s into segment `index`. Throws OutOfRange.
  Frame centerline_pose(std::size_t index, double s) const;

  /// Start frame of segment `index` (end frame of the previous one).
  const Frame& segment_start(std::size_t index) const;

 private:
  std::vector<PipeSegment> segments_;
  std::vector<Frame> starts_;
};

/// Parses the JSON network document. Throws ParseError (schema) or
/// ValidationError (invariants).
PipeNetwork load_network(std::string_view document);
PipeNetwork network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const PipeNetwork& net);
std::string serialize_network(const PipeNetwork& net);

enum class ElbowRatioMode {
  /// Centerline bend radius fixed at 1.5 D, as in the classic ratio formula.
  StandardBend,
  /// Centerline bend radius taken from the segment.
  Generalized,
};

/// Path radii (mm) of modules 1..3 through a bend with module 1 at roll theta5
/// (rad) from the inner side: R_c - (D/2) cos(theta5 + beta_i), with module
/// offsets beta = (0, -120, +120) deg. Throws ValidationError unless `bend` is
/// an elbow.
std::array<double, 3> module_path_radii(const PipeSegment& bend, double theta5,
                                        ElbowRatioMode mode = ElbowRatioMode::Generalized);

/// Angular offsets (rad) of modules 1..3 about the robot axis, in the
/// convention of the Jacobian and the path-radius formula.
inline constexpr std::array<double, 3> kModuleRollOffsets = {0.0, -2.0 * kPi / 3.0,
                                                             2.0 * kPi / 3.0};

}  // namespace omnipipe
