#include "omnipipe/pipenet.hpp"

#include <cmath>
#include <set>
#include <string>

#include "omnipipe/error.hpp"

namespace omnipipe {
namespace {

using nlohmann::json;

std::string field_name(std::size_t index, const char* field) {
  return "segments[" + std::to_string(index) + "]." + field;
}

void require_positive(double v, std::size_t index, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(field_name(index, field), "must be finite and > 0");
  }
}

void validate_segment(const PipeSegment& seg, std::size_t index) {
  require_positive(seg.diameter, index, "D_mm");
  switch (seg.kind) {
    case SegmentKind::Straight:
      require_positive(seg.length, index, "length_mm");
      break;
    case SegmentKind::Elbow:
      require_positive(seg.bend_radius, index, "bend_radius_mm");
      if (!(seg.bend_angle > 0.0 && seg.bend_angle <= kPi)) {
        throw ValidationError(field_name(index, "bend_angle_deg"), "must lie in (0, 180]");
      }
      if (!std::isfinite(seg.turn_plane_roll)) {
        throw ValidationError(field_name(index, "turn_plane_roll_deg"), "must be finite");
      }
      break;
    case SegmentKind::Tee:
      if (!std::isfinite(seg.branch_roll)) {
        throw ValidationError(field_name(index, "branch_roll_deg"), "must be finite");
      }
      if (seg.equivalent_radius < 0.0 || !std::isfinite(seg.equivalent_radius)) {
        throw ValidationError(field_name(index, "equivalent_radius_mm"), "must be >= 0");
      }
      break;
  }
}

// Rotation carrying the frame through `angle` of bend towards roll `roll`.
Eigen::Matrix3d bend_rotation(const Frame& start, double roll, double angle) {
  const Vec3 t = start.tangent();
  const Vec3 d =
      std::cos(roll) * start.orientation.col(0) + std::sin(roll) * start.orientation.col(1);
  return Eigen::AngleAxisd(angle, t.cross(d).normalized()).toRotationMatrix();
}

Frame advance(const Frame& start, const PipeSegment& seg, double s) {
  Frame f;
  if (!seg.bends()) {
    f.origin = start.origin + s * start.tangent();
    f.orientation = start.orientation;
    return f;
  }
  const double radius = seg.centerline_radius();
  const double roll = seg.turn_roll();
  const double angle = s / radius;
  const Vec3 t = start.tangent();
  const Vec3 d =
      std::cos(roll) * start.orientation.col(0) + std::sin(roll) * start.orientation.col(1);
  f.origin = start.origin + radius * std::sin(angle) * t + radius * (1.0 - std::cos(angle)) * d;
  f.orientation = bend_rotation(start, roll, angle) * start.orientation;
  return f;
}

double number(const json& j, const char* key, std::size_t index) {
  if (!j.contains(key)) {
    throw ParseError("segment " + std::to_string(index) + ": missing field '" + key + "'",
                     static_cast<int>(index));
  }
  const auto& v = j.at(key);
  if (!v.is_number()) {
    throw ParseError("segment " + std::to_string(index) + ": field '" + key + "' must be a number",
                     static_cast<int>(index));
  }
  return v.get<double>();
}

double optional_number(const json& j, const char* key, std::size_t index, double fallback) {
  return j.contains(key) ? number(j, key, index) : fallback;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, std::size_t index) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) {
      throw ParseError("segment " + std::to_string(index) + ": unknown field '" + key + "'",
                       static_cast<int>(index));
    }
  }
}

PipeSegment parse_segment(const json& j, std::size_t index) {
  const int idx = static_cast<int>(index);
  if (!j.is_object()) {
    throw ParseError("segment " + std::to_string(index) + ": must be an object", idx);
  }
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw ParseError("segment " + std::to_string(index) + ": missing string field 'kind'", idx);
  }
  const auto kind = j.at("kind").get<std::string>();
  PipeSegment seg;
  if (kind == "straight") {
    reject_unknown(j, {"kind", "D_mm", "length_mm"}, index);
    seg = PipeSegment::straight(number(j, "D_mm", index), number(j, "length_mm", index));
  } else if (kind == "elbow") {
    reject_unknown(j, {"kind", "D_mm", "bend_radius_mm", "bend_angle_deg", "turn_plane_roll_deg"},
                   index);
    seg = PipeSegment::elbow(number(j, "D_mm", index), number(j, "bend_radius_mm", index),
                             deg_to_rad(number(j, "bend_angle_deg", index)),
                             deg_to_rad(optional_number(j, "turn_plane_roll_deg", index, 0.0)));
  } else if (kind == "tee") {
    reject_unknown(j, {"kind", "D_mm", "branch_roll_deg", "exit", "equivalent_radius_mm"}, index);
    if (!j.contains("exit") || !j.at("exit").is_string()) {
      throw ParseError("segment " + std::to_string(index) + ": missing string field 'exit'", idx);
    }
    const auto exit = j.at("exit").get<std::string>();
    TeeExit e;
    if (exit == "branch") {
      e = TeeExit::Branch;
    } else if (exit == "through") {
      e = TeeExit::Through;
    } else {
      throw ParseError("segment " + std::to_string(index) + ": exit must be 'through' or 'branch'",
                       idx);
    }
    seg = PipeSegment::tee(number(j, "D_mm", index), e,
                           deg_to_rad(optional_number(j, "branch_roll_deg", index, 0.0)),
                           optional_number(j, "equivalent_radius_mm", index, 0.0));
  } else {
    throw ParseError("segment " + std::to_string(index) + ": unknown kind '" + kind + "'", idx);
  }
  return seg;
}

}  // namespace

const char* to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::Straight: return "straight";
    case SegmentKind::Elbow: return "elbow";
    case SegmentKind::Tee: return "tee";
  }
  return "unknown";
}

const char* to_string(TeeExit exit) { return exit == TeeExit::Branch ? "branch" : "through"; }

PipeSegment PipeSegment::straight(double diameter, double length) {
  PipeSegment s;
  s.kind = SegmentKind::Straight;
  s.diameter = diameter;
  s.length = length;
  return s;
}

PipeSegment PipeSegment::elbow(double diameter, double bend_radius, double bend_angle,
                               double turn_plane_roll) {
  PipeSegment s;
  s.kind = SegmentKind::Elbow;
  s.diameter = diameter;
  s.bend_radius = bend_radius;
  s.bend_angle = bend_angle;
  s.turn_plane_roll = turn_plane_roll;
  return s;
}

PipeSegment PipeSegment::tee(double diameter, TeeExit exit, double branch_roll,
                             double equivalent_radius) {
  PipeSegment s;
  s.kind = SegmentKind::Tee;
  s.diameter = diameter;
  s.exit = exit;
  s.branch_roll = branch_roll;
  s.equivalent_radius = equivalent_radius;
  return s;
}

bool PipeSegment::bends() const {
  return kind == SegmentKind::Elbow || (kind == SegmentKind::Tee && exit == TeeExit::Branch);
}

double PipeSegment::centerline_radius() const {
  switch (kind) {
    case SegmentKind::Straight: return 0.0;
    case SegmentKind::Elbow: return bend_radius;
    case SegmentKind::Tee:
      if (exit == TeeExit::Through) return 0.0;
      return equivalent_radius > 0.0 ? equivalent_radius : diameter / 2.0;
  }
  return 0.0;
}

double PipeSegment::centerline_bend() const {
  switch (kind) {
    case SegmentKind::Straight: return 0.0;
    case SegmentKind::Elbow: return bend_angle;
    case SegmentKind::Tee: return exit == TeeExit::Branch ? kPi / 2.0 : 0.0;
  }
  return 0.0;
}

double PipeSegment::centerline_length() const {
  switch (kind) {
    case SegmentKind::Straight: return length;
    case SegmentKind::Elbow: return bend_radius * bend_angle;
    case SegmentKind::Tee:
      // Through: the run across the junction spans one branch bore.
      return exit == TeeExit::Branch ? centerline_radius() * kPi / 2.0 : diameter;
  }
  return 0.0;
}

double PipeSegment::turn_roll() const {
  switch (kind) {
    case SegmentKind::Straight: return 0.0;
    case SegmentKind::Elbow: return turn_plane_roll;
    case SegmentKind::Tee: return branch_roll;
  }
  return 0.0;
}

PipeNetwork::PipeNetwork(std::vector<PipeSegment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw ValidationError("segments", "network must not be empty");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    validate_segment(segments_[i], i);
    if (i > 0 && segments_[i].diameter != segments_[i - 1].diameter) {
      throw ValidationError(field_name(i, "D_mm"),
                            "must equal the previous segment's diameter (no reducers)");
    }
  }
  starts_.reserve(segments_.size());
  Frame f;
  for (const auto& seg : segments_) {
    starts_.push_back(f);
    f = advance(f, seg, seg.centerline_length());
  }
}

const PipeSegment& PipeNetwork::segment(std::size_t index) const {
  if (index >= segments_.size()) throw OutOfRange("segment index out of range");
  return segments_[index];
}

const Frame& PipeNetwork::segment_start(std::size_t index) const {
  if (index >= starts_.size()) throw OutOfRange("segment index out of range");
  return starts_[index];
}

double PipeNetwork::total_length() const {
  double total = 0.0;
  for (const auto& seg : segments_) total += seg.centerline_length();
  return total;
}

Frame PipeNetwork::centerline_pose(std::size_t index, double s) const {
  const auto& seg = segment(index);
  const double len = seg.centerline_length();
  if (!(s >= 0.0 && s <= len)) {
    throw OutOfRange("arc length " + std::to_string(s) + " outside segment " +
                     std::to_string(index) + " of length " + std::to_string(len));
  }
  return advance(starts_[index], seg, s);
}

PipeNetwork network_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("network document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "segments") throw ParseError("unknown top-level field '" + key + "'");
  }
  if (!doc.contains("segments") || !doc.at("segments").is_array()) {
    throw ParseError("network document needs a 'segments' array");
  }
  std::vector<PipeSegment> segments;
  const auto& arr = doc.at("segments");
  for (std::size_t i = 0; i < arr.size(); ++i) segments.push_back(parse_segment(arr[i], i));
  return PipeNetwork(std::move(segments));
}

PipeNetwork load_network(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return network_from_json(doc);
}

json network_to_json(const PipeNetwork& net) {
  json segments = json::array();
  for (const auto& seg : net.segments()) {
    json j;
    j["kind"] = to_string(seg.kind);
    j["D_mm"] = seg.diameter;
    switch (seg.kind) {
      case SegmentKind::Straight:
        j["length_mm"] = seg.length;
        break;
      case SegmentKind::Elbow:
        j["bend_radius_mm"] = seg.bend_radius;
        j["bend_angle_deg"] = rad_to_deg(seg.bend_angle);
        j["turn_plane_roll_deg"] = rad_to_deg(seg.turn_plane_roll);
        break;
      case SegmentKind::Tee:
        j["branch_roll_deg"] = rad_to_deg(seg.branch_roll);
        j["exit"] = to_string(seg.exit);
        if (seg.equivalent_radius > 0.0) j["equivalent_radius_mm"] = seg.equivalent_radius;
        break;
    }
    segments.push_back(std::move(j));
  }
  return json{{"segments", std::move(segments)}};
}

std::string serialize_network(const PipeNetwork& net) { return network_to_json(net).dump(2); }

std::array<double, 3> module_path_radii(const PipeSegment& bend, double theta5,
                                        ElbowRatioMode mode) {
  if (bend.kind != SegmentKind::Elbow) {
    throw ValidationError("kind", std::string("module path radii need an elbow, got ") +
                                      to_string(bend.kind));
  }
  const double d = bend.diameter;
  const double center = mode == ElbowRatioMode::StandardBend ? 1.5 * d : bend.bend_radius;
  std::array<double, 3> radii{};
  for (int i = 0; i < 3; ++i) {
    radii[i] = center - 0.5 * d * std::cos(theta5 + kModuleRollOffsets[i]);
  }
  return radii;
}

}  // namespace omnipipe
