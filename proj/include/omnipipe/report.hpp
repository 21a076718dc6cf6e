#pragma once

// JSON views of library results, geometry files and built-in networks.
// Angles are reported in degrees.

#include <string_view>

#include <json.hpp>

#include "omnipipe/kinematics.hpp"
#include "omnipipe/montecarlo.hpp"
#include "omnipipe/pipenet.hpp"
#include "omnipipe/planner.hpp"
#include "omnipipe/sim.hpp"
#include "omnipipe/singularity.hpp"

namespace omnipipe {

nlohmann::json to_json(const TwistVector& t);
nlohmann::json to_json(const CommandVector& c);
nlohmann::json to_json(const RobotGeometry& g);
nlohmann::json plan_to_json(const Plan& plan);

struct SectorReport {
  double diameter = 0.0;
  double reach_max = 0.0;
  double phi_max = 0.0;  ///< rad
  int steps = 0;
  SingularityRegion region;
};
nlohmann::json to_json(const SectorReport& report);

nlohmann::json sim_summary_json(const SimResult& result, const PipeNetwork& net);
nlohmann::json to_json(const MonteCarloResult& result);

/// Geometry document: {"lug_radius_mm", "arm_length_mm", "a_offset_mm",
/// "reach_min_mm", "reach_max_mm", "module_outer_radius_mm"}; every field is
/// optional and defaults to the built-in robot. Unknown fields are rejected
/// with ParseError; the result is validated.
RobotGeometry load_geometry(std::string_view document);
RobotGeometry geometry_from_json(const nlohmann::json& doc);

/// Straight lead-in of 2D, a tee left through `exit`, and a 2D straight.
PipeNetwork default_tee_network(double diameter = 160.0, TeeExit exit = TeeExit::Branch);

}  // namespace omnipipe
