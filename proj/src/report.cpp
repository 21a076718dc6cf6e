#include "omnipipe/report.hpp"

#include <cmath>

#include "omnipipe/angles.hpp"
#include "omnipipe/error.hpp"

namespace omnipipe {

using nlohmann::json;

json to_json(const TwistVector& t) {
  return {{"wx", t.omega_x}, {"wy", t.omega_y}, {"wz", t.omega_z}, {"vcz", t.v_cz}};
}

json to_json(const CommandVector& c) {
  return {{"th1", c.theta_dot_1}, {"th2", c.theta_dot_2}, {"th3", c.theta_dot_3},
          {"th4", c.theta_dot_4}};
}

json to_json(const RobotGeometry& g) {
  return {{"lug_radius_mm", g.lug_radius},   {"arm_length_mm", g.arm_length},
          {"a_offset_mm", g.a_offset},       {"reach_min_mm", g.reach_min},
          {"reach_max_mm", g.reach_max},     {"module_outer_radius_mm", g.module_outer_radius}};
}

json plan_to_json(const Plan& plan) {
  json steps = json::array();
  for (const auto& s : plan) {
    json j = {
        {"kind", to_string(s.kind)},
        {"segment", s.segment},
        {"command", to_json(s.command)},
        {"duration_s", s.duration_s},
        {"completion", to_string(s.completion)},
        {"module_speeds_mm_s", s.module_speeds},
        {"theta5_before_deg", rad_to_deg(s.theta5_before)},
        {"theta5_after_deg", rad_to_deg(s.theta5_after)},
        {"module_rotation_after_deg", rad_to_deg(s.module_rotation_after)},
        {"drive_sign_after", s.drive_sign_after},
    };
    if (s.completion != Completion::Duration) j["target_s_mm"] = s.target_s;
    if (s.kind == StepKind::HolonomicRotate) {
      j["rotation_deg"] = rad_to_deg(s.rotation);
      j["crosses_no_motion_line"] = s.crosses_no_motion_line;
      j["crosses_half_turn"] = s.crosses_half_turn;
    }
    if (s.trigger.kind == Trigger::Kind::HeadReachesFractionOfD) {
      j["trigger"] = {{"kind", "head_reaches_fraction_of_D"}, {"fraction", s.trigger.fraction}};
    } else {
      j["trigger"] = {{"kind", "immediate"}};
    }
    steps.push_back(std::move(j));
  }
  return {{"steps", steps}};
}

json to_json(const SectorReport& report) {
  json arcs = json::array();
  for (const auto& a : report.region.forbidden_arcs.merged_arcs()) {
    arcs.push_back({{"lo_deg", a.lo}, {"hi_deg", a.hi}});
  }
  json forbidden = json::array();
  for (const auto& a : report.region.orientation_forbidden.merged_arcs()) {
    forbidden.push_back({{"lo_deg", a.lo}, {"hi_deg", a.hi}});
  }
  return {{"diameter_mm", report.diameter},
          {"reach_max_mm", report.reach_max},
          {"phi_max_deg", rad_to_deg(report.phi_max)},
          {"sweep_steps", report.steps},
          {"sector_deg", report.region.sector_measure_deg},
          {"free_margin_deg", report.region.free_margin_deg},
          {"failure_probability", failure_probability(report.region)},
          {"arcs", arcs},
          {"forbidden_theta5", forbidden}};
}

json sim_summary_json(const SimResult& result, const PipeNetwork& net) {
  return {{"outcome", to_string(result.outcome)},
          {"message", result.message},
          {"failed_step", result.failed_step},
          {"mid_turn_violation", result.mid_turn_violation},
          {"time_s", result.final_state.time},
          {"segment", result.final_state.segment},
          {"s_mm", result.final_state.s},
          {"theta5_deg", rad_to_deg(result.final_state.theta5(net))},
          {"records", result.trajectory.size()}};
}

json to_json(const MonteCarloResult& r) {
  return {{"trials", r.trials},
          {"successes", r.successes},
          {"success_rate", r.success_rate},
          {"ci95", {r.ci_low, r.ci_high}},
          {"seed", r.seed},
          {"with_holonomic", r.with_holonomic}};
}

RobotGeometry geometry_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("geometry document must be a JSON object");
  RobotGeometry g;
  const std::pair<const char*, double*> fields[] = {
      {"lug_radius_mm", &g.lug_radius}, {"arm_length_mm", &g.arm_length},
      {"a_offset_mm", &g.a_offset},     {"reach_min_mm", &g.reach_min},
      {"reach_max_mm", &g.reach_max},   {"module_outer_radius_mm", &g.module_outer_radius}};
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const auto& [name, target] : fields) {
      if (key != name) continue;
      if (!value.is_number()) throw ParseError("geometry field '" + key + "' must be a number");
      *target = value.get<double>();
      known = true;
    }
    if (!known) throw ParseError("unknown geometry field '" + key + "'");
  }
  g.validate();
  return g;
}

RobotGeometry load_geometry(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return geometry_from_json(doc);
}

PipeNetwork default_tee_network(double diameter, TeeExit exit) {
  return PipeNetwork({PipeSegment::straight(diameter, 2.0 * diameter),
                      PipeSegment::tee(diameter, exit),
                      PipeSegment::straight(diameter, 2.0 * diameter)});
}

}  // namespace omnipipe
