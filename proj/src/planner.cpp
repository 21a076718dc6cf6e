#include "omnipipe/planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "omnipipe/angles.hpp"
#include "omnipipe/drive.hpp"
#include "omnipipe/error.hpp"

namespace omnipipe {
namespace {

constexpr double kThirdTurn = 2.0 * kPi / 3.0;

double relative_roll(double roll, const PipeSegment& seg) {
  return wrap_positive(roll - seg.turn_roll(), 2.0 * kPi);
}

int require_drive_sign(double alpha, const PlannerConfig& cfg) {
  const int sign = drive_sign(alpha, cfg.wobble_deadband);
  if (sign == 0) throw PlanError("modules rest on the no-motion line; the robot cannot translate");
  return sign;
}

MissionStep rotation_step(double delta, double rate, double alpha_before, double alpha_per_roll,
                          double deadband) {
  MissionStep step;
  step.kind = StepKind::HolonomicRotate;
  step.completion = Completion::Duration;
  step.rotation = delta;
  step.module_rotation_after = alpha_before + alpha_per_roll * delta;
  step.drive_sign_after = drive_sign(step.module_rotation_after, deadband);
  if (delta == 0.0) return step;
  step.command = {0.0, 0.0, 0.0, delta > 0.0 ? rate : -rate};
  step.duration_s = std::abs(delta) / rate;
  step.crosses_no_motion_line = crosses_no_motion_line(alpha_before, step.module_rotation_after);
  step.crosses_half_turn = crosses_half_turn(alpha_before, step.module_rotation_after);
  return step;
}

// Stretches or shortens a roll so the modules do not end on the no-motion
// line. Candidates are tried nearest-first; `accept` vets the resulting theta5.
double avoid_no_motion_line(double delta, double alpha_before, double alpha_per_roll,
                            double theta5_before, const PlannerConfig& cfg,
                            const std::function<bool(double)>& accept) {
  const double alpha_after = alpha_before + alpha_per_roll * delta;
  if (alpha_per_roll == 0.0 || !on_no_motion_line(alpha_after, cfg.wobble_deadband)) return delta;
  const double line = kPi / 2.0 + kPi * std::round((alpha_after - kPi / 2.0) / kPi);
  const double offset = cfg.wobble_deadband + cfg.no_motion_clearance;
  std::array<double, 2> candidates = {(line - offset - alpha_before) / alpha_per_roll,
                                      (line + offset - alpha_before) / alpha_per_roll};
  std::sort(candidates.begin(), candidates.end(), [&](double x, double y) {
    return std::abs(x - delta) < std::abs(y - delta);
  });
  for (double c : candidates) {
    if (accept(theta5_before + c)) return c;
  }
  throw PlanError("no roll clears both the no-motion line and the singularity region");
}

// Appends a roll of `delta` (already adjusted) and advances the context.
void push_rotation(std::vector<MissionStep>& steps, double delta, const PipeSegment& seg,
                   const PlannerConfig& cfg, const RobotGeometry& geom, PlanContext& ctx) {
  if (delta == 0.0) return;
  const double k = module_rotation_per_roll(seg.diameter, geom, cfg.self_rotation_gain);
  MissionStep step = rotation_step(delta, cfg.holonomic_rate, ctx.module_rotation, k,
                                   cfg.wobble_deadband);
  step.segment = ctx.segment;
  step.theta5_before = relative_roll(ctx.roll, seg);
  ctx.roll += delta;
  ctx.module_rotation = step.module_rotation_after;
  step.theta5_after = relative_roll(ctx.roll, seg);
  steps.push_back(step);
}

CommandVector drive_command(const std::array<double, 3>& speeds, int sign,
                            const RobotGeometry& geom) {
  return {sign * speeds[0] / geom.lug_radius, sign * speeds[1] / geom.lug_radius,
          sign * speeds[2] / geom.lug_radius, 0.0};
}

MissionStep drive_step(std::size_t segment, double from_s, double to_s, Completion completion,
                       const PlannerConfig& cfg, const RobotGeometry& geom,
                       const PlanContext& ctx, const PipeSegment& seg) {
  const int sign = require_drive_sign(ctx.module_rotation, cfg);
  const double v = cfg.straight_speed;
  MissionStep step;
  step.kind = StepKind::Drive;
  step.segment = segment;
  step.module_speeds = {v, v, v};
  step.command = drive_command(step.module_speeds, sign, geom);
  step.duration_s = (to_s - from_s) / v;
  step.completion = completion;
  step.target_s = to_s;
  step.theta5_before = step.theta5_after = relative_roll(ctx.roll, seg);
  step.module_rotation_after = ctx.module_rotation;
  step.drive_sign_after = sign;
  return step;
}

}  // namespace

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Drive: return "drive";
    case StepKind::HolonomicRotate: return "holonomic_rotate";
    case StepKind::TurnElbow: return "turn_elbow";
    case StepKind::TurnTee: return "turn_tee";
  }
  return "unknown";
}

const char* to_string(Completion completion) {
  switch (completion) {
    case Completion::Duration: return "duration";
    case Completion::SegmentEnd: return "segment_end";
    case Completion::TriggerPoint: return "trigger_point";
  }
  return "unknown";
}

void PlannerConfig::validate() const {
  if (!(straight_speed > 0.0) || !std::isfinite(straight_speed)) {
    throw ValidationError("straight_speed", "must be > 0");
  }
  if (!(tee_trigger_fraction > 0.0 && tee_trigger_fraction <= 1.0)) {
    throw ValidationError("tee_trigger_fraction", "must lie in (0, 1]");
  }
  if (!(wobble_deadband >= 0.0 && wobble_deadband <= deg_to_rad(10.0))) {
    throw ValidationError("wobble_deadband", "must lie in [0, 10] deg");
  }
  if (!(holonomic_rate > 0.0) || !std::isfinite(holonomic_rate)) {
    throw ValidationError("holonomic_rate", "must be > 0");
  }
  if (!(self_rotation_gain >= 0.0) || !std::isfinite(self_rotation_gain)) {
    throw ValidationError("self_rotation_gain", "must be >= 0");
  }
  if (!(tee_phi_max < kPi / 2.0)) throw ValidationError("tee_phi_max", "must be below 90 deg");
  if (tee_sweep_steps < 2) throw ValidationError("tee_sweep_steps", "must be >= 2");
  if (!(no_motion_clearance > 0.0)) throw ValidationError("no_motion_clearance", "must be > 0");
}

double PlannerConfig::resolved_tee_phi_max() const {
  return tee_phi_max > 0.0 ? tee_phi_max : default_tee_phi_max(1.0, 1.0);
}

MissionStep plan_straight(double length, const PlannerConfig& cfg, const RobotGeometry& geom) {
  return plan_straight(length, cfg, geom, PlanContext{});
}

MissionStep plan_straight(double length, const PlannerConfig& cfg, const RobotGeometry& geom,
                          const PlanContext& ctx) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ValidationError("length", "straight run must be > 0 mm");
  }
  return drive_step(ctx.segment, 0.0, length, Completion::SegmentEnd, cfg, geom, ctx,
                    PipeSegment::straight(1.0, length));
}

MissionStep holonomic_rotate_step(double delta, double rate, double alpha_before,
                                  double alpha_per_roll, double deadband) {
  if (!(rate > 0.0)) throw ValidationError("rate", "holonomic rate must be > 0");
  if (std::abs(delta) > kThirdTurn / 2.0) delta = wrap_signed(delta, kThirdTurn);
  return rotation_step(delta, rate, alpha_before, alpha_per_roll, deadband);
}

std::vector<MissionStep> plan_elbow(const PipeSegment& elbow, double theta5,
                                    const PlannerConfig& cfg, const RobotGeometry& geom) {
  PlanContext ctx;
  ctx.roll = theta5 + elbow.turn_roll();
  return plan_elbow(elbow, cfg, geom, ctx);
}

std::vector<MissionStep> plan_elbow(const PipeSegment& elbow, const PlannerConfig& cfg,
                                    const RobotGeometry& geom, PlanContext& ctx) {
  if (elbow.kind != SegmentKind::Elbow) throw ValidationError("kind", "plan_elbow needs an elbow");
  std::vector<MissionStep> steps;
  if (cfg.with_holonomic) {
    // Nearest pose with one module on the innermost curvature: theta5 = 0 mod 120.
    const double theta5 = relative_roll(ctx.roll, elbow);
    double delta = -wrap_signed(theta5, kThirdTurn);
    const double k = module_rotation_per_roll(elbow.diameter, geom, cfg.self_rotation_gain);
    delta = avoid_no_motion_line(delta, ctx.module_rotation, k, theta5, cfg,
                                 [](double) { return true; });
    push_rotation(steps, delta, elbow, cfg, geom, ctx);
  }

  const double theta5 = relative_roll(ctx.roll, elbow);
  const int sign = require_drive_sign(ctx.module_rotation, cfg);
  const auto radii = module_path_radii(elbow, theta5, cfg.elbow_mode);
  const double mean_radius = (radii[0] + radii[1] + radii[2]) / 3.0;
  const double v = cfg.straight_speed;

  MissionStep turn;
  turn.kind = StepKind::TurnElbow;
  turn.segment = ctx.segment;
  for (int i = 0; i < 3; ++i) turn.module_speeds[i] = v * radii[i] / mean_radius;
  turn.command = drive_command(turn.module_speeds, sign, geom);
  turn.duration_s = elbow.centerline_length() / v;
  turn.completion = Completion::SegmentEnd;
  turn.target_s = elbow.centerline_length();
  turn.theta5_before = turn.theta5_after = theta5;
  turn.module_rotation_after = ctx.module_rotation;
  turn.drive_sign_after = sign;
  steps.push_back(turn);
  return steps;
}

CommandVector tee_turn_command(const PipeSegment& tee, double theta5, const PlannerConfig& cfg,
                               const RobotGeometry& geom) {
  const double target_radius = tee.centerline_radius();
  if (!(target_radius > 0.0)) throw PlanError("tee turn needs a branch exit");
  const double v = cfg.straight_speed;
  const double r = geom.lug_radius;
  // Bending about the axis perpendicular to the turn direction, which sits at
  // roll -theta5 in the robot frame.
  const double ux = std::sin(theta5);
  const double uy = std::cos(theta5);
  const CommandVector base = inverse_kinematics({0.0, 0.0, 0.0, v}, geom);
  const CommandVector unit = inverse_kinematics({ux, uy, 0.0, 0.0}, geom);
  const std::array<double, 3> v0 = {r * base.theta_dot_1, r * base.theta_dot_2,
                                    r * base.theta_dot_3};
  const std::array<double, 3> dv = {r * unit.theta_dot_1, r * unit.theta_dot_2,
                                    r * unit.theta_dot_3};
  // g(w) = sum |V_i(w)| - 3 R w is convex, g(0) = 3v > 0; it has a root only
  // when its final slope sum |dV_i| - 3R is negative.
  const double slope_limit = std::abs(dv[0]) + std::abs(dv[1]) + std::abs(dv[2]);
  if (slope_limit >= 3.0 * target_radius) {
    throw PlanError("tee turn radius " + std::to_string(target_radius) +
                    " mm is tighter than the robot's minimum " + std::to_string(slope_limit / 3.0) +
                    " mm");
  }
  auto g = [&](double w) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) sum += std::abs(v0[i] + w * dv[i]);
    return sum - 3.0 * target_radius * w;
  };
  double lo = 0.0;
  double hi = v / target_radius;
  while (g(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  const double w = 0.5 * (lo + hi);
  return inverse_kinematics({w * ux, w * uy, 0.0, v}, geom);
}

std::vector<MissionStep> plan_tee(const PipeSegment& tee, double theta5,
                                  const SingularityRegion& region, const PlannerConfig& cfg,
                                  const RobotGeometry& geom) {
  PlanContext ctx;
  ctx.roll = theta5 + tee.turn_roll();
  return plan_tee(tee, region, cfg, geom, ctx);
}

std::vector<MissionStep> plan_tee(const PipeSegment& tee, const SingularityRegion& region,
                                  const PlannerConfig& cfg, const RobotGeometry& geom,
                                  PlanContext& ctx) {
  if (tee.kind != SegmentKind::Tee) throw ValidationError("kind", "plan_tee needs a tee");
  std::vector<MissionStep> steps;
  const double k = module_rotation_per_roll(tee.diameter, geom, cfg.self_rotation_gain);
  const double length = tee.centerline_length();

  if (tee.exit == TeeExit::Through) {
    if (cfg.with_holonomic) {
      // Modules flank the branch mouth: theta5 = 60 mod 120.
      const double theta5 = relative_roll(ctx.roll, tee);
      double delta = -wrap_signed(theta5 - kPi / 3.0, kThirdTurn);
      delta = avoid_no_motion_line(delta, ctx.module_rotation, k, theta5, cfg,
                                   [](double) { return true; });
      push_rotation(steps, delta, tee, cfg, geom, ctx);
    }
    steps.push_back(drive_step(ctx.segment, 0.0, length, Completion::SegmentEnd, cfg, geom, ctx,
                               tee));
    return steps;
  }

  const double theta5 = relative_roll(ctx.roll, tee);
  if (cfg.with_holonomic && (cfg.align_tee || in_singularity(theta5, region))) {
    double delta =
        cfg.align_tee ? -wrap_signed(theta5, kThirdTurn) : escape_rotation(theta5, region);
    if (cfg.align_tee && in_singularity(theta5 + delta, region)) {
      delta = escape_rotation(theta5, region);
    }
    delta = avoid_no_motion_line(delta, ctx.module_rotation, k, theta5, cfg,
                                 [&](double t) { return !in_singularity(t, region); });
    push_rotation(steps, delta, tee, cfg, geom, ctx);
  }

  const double trigger_s = cfg.tee_trigger_fraction * tee.diameter;
  if (!(trigger_s < length)) {
    throw PlanError("turn trigger point lies beyond the tee's centerline");
  }
  steps.push_back(drive_step(ctx.segment, 0.0, trigger_s, Completion::TriggerPoint, cfg, geom,
                             ctx, tee));

  const int sign = require_drive_sign(ctx.module_rotation, cfg);
  const double theta5_turn = relative_roll(ctx.roll, tee);
  const CommandVector raw = tee_turn_command(tee, theta5_turn, cfg, geom);
  MissionStep turn;
  turn.kind = StepKind::TurnTee;
  turn.segment = ctx.segment;
  turn.module_speeds = {geom.lug_radius * raw.theta_dot_1, geom.lug_radius * raw.theta_dot_2,
                        geom.lug_radius * raw.theta_dot_3};
  turn.command = drive_command(turn.module_speeds, sign, geom);
  turn.duration_s = (length - trigger_s) / cfg.straight_speed;
  turn.completion = Completion::SegmentEnd;
  turn.target_s = length;
  turn.trigger = {Trigger::Kind::HeadReachesFractionOfD, cfg.tee_trigger_fraction};
  turn.theta5_before = turn.theta5_after = theta5_turn;
  turn.module_rotation_after = ctx.module_rotation;
  turn.drive_sign_after = sign;
  steps.push_back(turn);
  return steps;
}

std::map<std::size_t, SingularityRegion> tee_regions(const PipeNetwork& net,
                                                     const RobotGeometry& geom,
                                                     const PlannerConfig& cfg) {
  std::map<std::size_t, SingularityRegion> regions;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& seg = net.segment(i);
    if (seg.kind == SegmentKind::Tee && seg.exit == TeeExit::Branch) {
      regions.emplace(i, sweep_t_junction(seg.diameter, geom, cfg.resolved_tee_phi_max(),
                                          cfg.tee_sweep_steps));
    }
  }
  return regions;
}

Plan plan_mission(const PipeNetwork& net, double initial_roll, const PlannerConfig& cfg,
                  const RobotGeometry& geom) {
  return plan_mission(net, initial_roll, cfg, geom, tee_regions(net, geom, cfg));
}

Plan plan_mission(const PipeNetwork& net, double initial_roll, const PlannerConfig& cfg,
                  const RobotGeometry& geom,
                  const std::map<std::size_t, SingularityRegion>& regions) {
  cfg.validate();
  geom.validate();
  Plan plan;
  PlanContext ctx;
  ctx.roll = initial_roll;
  for (std::size_t i = 0; i < net.size(); ++i) {
    ctx.segment = i;
    const auto& seg = net.segment(i);
    switch (seg.kind) {
      case SegmentKind::Straight:
        plan.push_back(plan_straight(seg.length, cfg, geom, ctx));
        break;
      case SegmentKind::Elbow: {
        auto steps = plan_elbow(seg, cfg, geom, ctx);
        plan.insert(plan.end(), steps.begin(), steps.end());
        break;
      }
      case SegmentKind::Tee: {
        static const SingularityRegion kNone;
        const auto it = regions.find(i);
        if (seg.exit == TeeExit::Branch && it == regions.end()) {
          throw PlanError("no singularity region supplied for tee " + std::to_string(i));
        }
        auto steps = plan_tee(seg, it == regions.end() ? kNone : it->second, cfg, geom, ctx);
        plan.insert(plan.end(), steps.begin(), steps.end());
        break;
      }
    }
  }
  return plan;
}

}  // namespace omnipipe
