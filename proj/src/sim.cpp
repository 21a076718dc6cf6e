#include "omnipipe/sim.hpp"

#include <cmath>
#include <optional>
#include <ostream>

#include <fmt/format.h>

#include "omnipipe/angles.hpp"
#include "omnipipe/drive.hpp"
#include "omnipipe/error.hpp"

namespace omnipipe {
namespace {

bool is_turn(const PipeSegment& seg) { return seg.kind != SegmentKind::Straight; }

std::optional<std::size_t> upcoming_turn(const PipeNetwork& net, std::size_t segment) {
  for (std::size_t i = segment; i < net.size(); ++i) {
    if (is_turn(net.segment(i))) return i;
  }
  return std::nullopt;
}

double relative_theta5(double roll, const PipeNetwork& net, std::size_t segment) {
  const auto turn = upcoming_turn(net, segment);
  const double ref = turn ? net.segment(*turn).turn_roll() : 0.0;
  return wrap_positive(roll - ref, 2.0 * kPi);
}

bool singular_here(const SimState& state, const PipeNetwork& net,
                   const std::map<std::size_t, SingularityRegion>& regions) {
  const auto turn = upcoming_turn(net, state.segment);
  if (!turn) return false;
  const auto it = regions.find(*turn);
  if (it == regions.end()) return false;
  return in_singularity(relative_theta5(state.roll, net, state.segment), it->second);
}

TrajectoryRecord snapshot(const SimState& state, const PipeNetwork& net, std::string event) {
  TrajectoryRecord rec;
  rec.time = state.time;
  rec.segment = state.segment;
  rec.s = state.s;
  rec.theta5 = state.theta5(net);
  rec.event = std::move(event);
  return rec;
}

double axial_speed(const SimState& state, const CommandVector& cmd, const RobotGeometry& geom,
                   const SimConfig& cfg) {
  CommandVector eff = cmd;
  eff.theta_dot_1 *= drive_sign(state.module_rotation[0], cfg.wobble_deadband);
  eff.theta_dot_2 *= drive_sign(state.module_rotation[1], cfg.wobble_deadband);
  eff.theta_dot_3 *= drive_sign(state.module_rotation[2], cfg.wobble_deadband);
  return forward_kinematics(eff, geom).v_cz;
}

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "must be > 0");
  if (!(wobble_deadband >= 0.0 && wobble_deadband <= deg_to_rad(10.0))) {
    throw ValidationError("wobble_deadband", "must lie in [0, 10] deg");
  }
  if (!(self_rotation_gain >= 0.0) || !std::isfinite(self_rotation_gain)) {
    throw ValidationError("self_rotation_gain", "must be >= 0");
  }
  if (max_substeps < 1) throw ValidationError("max_substeps", "must be >= 1");
}

double SimState::theta5(const PipeNetwork& net) const {
  return relative_theta5(roll, net, segment);
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Success: return "success";
    case Outcome::FailureSingularity: return "failure_singularity";
    case Outcome::Stalled: return "stalled";
    case Outcome::Incomplete: return "incomplete";
  }
  return "unknown";
}

StepResult step(const SimState& state, const CommandVector& cmd, double dt,
                const PipeNetwork& net, const RobotGeometry& geom, const SimConfig& cfg) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "must be > 0");
  if (!cmd.finite()) throw ValidationError("command", "must be finite");

  StepResult out;
  out.record.command = cmd;
  CommandVector eff = cmd;
  for (int i = 0; i < 3; ++i) {
    out.record.drive_signs[i] = drive_sign(state.module_rotation[i], cfg.wobble_deadband);
  }
  eff.theta_dot_1 *= out.record.drive_signs[0];
  eff.theta_dot_2 *= out.record.drive_signs[1];
  eff.theta_dot_3 *= out.record.drive_signs[2];
  out.record.twist = forward_kinematics(eff, geom);

  SimState next = state;
  const double alpha_rate = module_self_rotation_rate(
      cmd.theta_dot_4, net.segment(state.segment).diameter, geom, cfg.self_rotation_gain);
  next.s += out.record.twist.v_cz * dt;
  next.roll += cmd.theta_dot_4 * dt;
  for (auto& a : next.module_rotation) a += alpha_rate * dt;
  next.time += dt;

  while (next.s > net.segment(next.segment).centerline_length()) {
    if (next.segment + 1 < net.size()) {
      next.s -= net.segment(next.segment).centerline_length();
      ++next.segment;
    } else {
      next.s = net.segment(next.segment).centerline_length();
      out.record.event = "end_of_network";
    }
  }
  while (next.s < 0.0) {
    if (next.segment > 0) {
      --next.segment;
      next.s += net.segment(next.segment).centerline_length();
    } else {
      next.s = 0.0;
      out.record.event = "start_of_network";
    }
  }

  out.record.time = next.time;
  out.record.segment = next.segment;
  out.record.s = next.s;
  out.record.theta5 = next.theta5(net);
  out.state = next;
  return out;
}

SimResult run_mission(const PipeNetwork& net, const Plan& plan, const SimConfig& cfg,
                      const RobotGeometry& geom, const PlannerConfig& pcfg,
                      double initial_roll) {
  return run_mission(net, plan, cfg, geom, tee_regions(net, geom, pcfg), initial_roll);
}

SimResult run_mission(const PipeNetwork& net, const Plan& plan, const SimConfig& cfg,
                      const RobotGeometry& geom,
                      const std::map<std::size_t, SingularityRegion>& regions,
                      double initial_roll) {
  cfg.validate();
  geom.validate();
  SimResult result;
  SimState state;
  state.roll = initial_roll;
  bool reached_end = false;

  auto log = [&](TrajectoryRecord rec) {
    rec.singular = singular_here(state, net, regions);
    if (cfg.record) result.trajectory.push_back(std::move(rec));
  };
  auto finish = [&](Outcome outcome, std::size_t index, std::string message) {
    result.outcome = outcome;
    result.failed_step = index;
    result.message = std::move(message);
    result.final_state = state;
    return result;
  };

  log(snapshot(state, net, "start"));

  for (std::size_t i = 0; i < plan.size(); ++i) {
    const MissionStep& ms = plan[i];
    if (reached_end) throw PlanError("plan continues past the end of the network");
    if (ms.segment != state.segment) {
      throw PlanError(fmt::format("step {} targets segment {} but the robot is in segment {}", i,
                                  ms.segment, state.segment));
    }
    const PipeSegment& seg = net.segment(state.segment);
    const SingularityRegion* region = nullptr;
    if (ms.kind == StepKind::TurnTee) {
      const auto it = regions.find(state.segment);
      if (seg.kind != SegmentKind::Tee || it == regions.end()) {
        throw PlanError(fmt::format("step {} turns at segment {}, which is not a branch tee", i,
                                    state.segment));
      }
      region = &it->second;
      if (in_singularity(state.theta5(net), *region)) {
        log(snapshot(state, net, "singularity_at_turn_onset"));
        return finish(Outcome::FailureSingularity, i,
                      fmt::format("theta5 = {:.4f} deg lies in the singularity region at turn onset",
                                  rad_to_deg(state.theta5(net))));
      }
    }

    auto advance = [&](double h) {
      StepResult r = step(state, ms.command, h, net, geom, cfg);
      state = r.state;
      if (region && in_singularity(state.theta5(net), *region) && r.record.event.empty()) {
        if (!result.mid_turn_violation) r.record.event = "mid_turn_singularity";
        result.mid_turn_violation = true;
      }
      return r.record;
    };

    if (ms.completion == Completion::Duration) {
      if (!(ms.duration_s >= 0.0) || !std::isfinite(ms.duration_s)) {
        throw PlanError(fmt::format("step {} has an invalid duration", i));
      }
      if (ms.duration_s == 0.0) continue;
      const long n = static_cast<long>(std::ceil(ms.duration_s / cfg.dt));
      for (long k = 0; k < n; ++k) {
        const double h = k + 1 < n ? cfg.dt : ms.duration_s - static_cast<double>(n - 1) * cfg.dt;
        if (h > 0.0) log(advance(h));
      }
      continue;
    }

    const double target = ms.completion == Completion::SegmentEnd ? seg.centerline_length()
                                                                   : ms.target_s;
    if (!(target >= state.s && target <= seg.centerline_length())) {
      throw PlanError(fmt::format("step {} targets s = {} mm outside the reachable range", i,
                                  target));
    }
    const std::size_t target_segment = state.segment;
    for (long k = 0; state.s < target; ++k) {
      if (k >= cfg.max_substeps) {
        return finish(Outcome::Stalled, i, fmt::format("step {} exceeded the substep limit", i));
      }
      const double v = axial_speed(state, ms.command, geom, cfg);
      if (!(v > 0.0)) {
        log(snapshot(state, net, "stall"));
        return finish(Outcome::Stalled, i,
                      fmt::format("axial speed {} mm/s does not advance the robot in step {}", v,
                                  i));
      }
      const double remaining = target - state.s;
      if (remaining <= v * cfg.dt) {
        TrajectoryRecord rec = advance(remaining / v);
        state.segment = target_segment;
        state.s = target;
        rec.segment = state.segment;
        rec.s = state.s;
        rec.theta5 = state.theta5(net);
        if (rec.event == "end_of_network") rec.event.clear();
        log(std::move(rec));
        break;
      }
      log(advance(cfg.dt));
    }
    if (ms.completion == Completion::SegmentEnd) {
      if (state.segment + 1 < net.size()) {
        ++state.segment;
        state.s = 0.0;
      } else {
        reached_end = true;
      }
    }
  }

  if (reached_end) {
    if (cfg.record && !result.trajectory.empty()) result.trajectory.back().event = "complete";
    return finish(Outcome::Success, plan.size(), "network traversed");
  }
  return finish(Outcome::Incomplete, plan.size(), "plan ended before the end of the network");
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
  out << kTrajectoryCsvHeader << '\n';
  for (const auto& r : records) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.time, r.segment,
                       r.s, rad_to_deg(r.theta5), r.command.theta_dot_1, r.command.theta_dot_2,
                       r.command.theta_dot_3, r.command.theta_dot_4, r.twist.omega_x,
                       r.twist.omega_y, r.twist.omega_z, r.twist.v_cz, r.drive_signs[0],
                       r.drive_signs[1], r.drive_signs[2], r.singular ? 1 : 0, r.event);
  }
}

}  // namespace omnipipe
