#include <doctest.h>

#include <cmath>

#include "omnipipe/angles.hpp"
#include "omnipipe/drive.hpp"
#include "omnipipe/error.hpp"
#include "omnipipe/planner.hpp"
#include "omnipipe/report.hpp"

using namespace omnipipe;

namespace {

SingularityRegion default_region() {
  return sweep_t_junction(160.0, RobotGeometry{}, kPi / 4.0, 91);
}

double mean_speed(const MissionStep& s) {
  return (s.module_speeds[0] + s.module_speeds[1] + s.module_speeds[2]) / 3.0;
}

}  // namespace

TEST_SUITE("planner") {
  TEST_CASE("straight drive") {
    const PlannerConfig cfg;
    const RobotGeometry g;
    const auto s = plan_straight(1000.0, cfg, g);
    CHECK(s.kind == StepKind::Drive);
    CHECK(s.command.theta_dot_1 == doctest::Approx(6.6666666666666667));
    CHECK(s.command.theta_dot_3 == s.command.theta_dot_1);
    CHECK(s.command.theta_dot_4 == 0.0);
    CHECK(s.duration_s == doctest::Approx(10.0));
    CHECK(forward_kinematics(s.command, g).v_cz == doctest::Approx(100.0));
    CHECK_THROWS_AS(plan_straight(0.0, cfg, g), ValidationError);
  }

  TEST_CASE("holonomic rotate step") {
    CHECK(holonomic_rotate_step(0.0, 0.5).empty());
    const auto s = holonomic_rotate_step(deg_to_rad(30.0), 0.5);
    CHECK(s.duration_s == doctest::Approx(1.0471975511965976));
    CHECK(s.command.theta_dot_4 == 0.5);
    const auto n = holonomic_rotate_step(deg_to_rad(-30.0), 0.5);
    CHECK(n.command.theta_dot_4 == -0.5);
    // 100 deg normalizes to -20 deg.
    CHECK(rad_to_deg(holonomic_rotate_step(deg_to_rad(100.0), 0.5).rotation) ==
          doctest::Approx(-20.0));
    // Coupling -4 per unit roll: 50 deg of roll turns the modules by -200 deg.
    const auto h = holonomic_rotate_step(deg_to_rad(50.0), 0.5, 0.0, -4.0);
    CHECK(h.crosses_half_turn);
    CHECK(h.crosses_no_motion_line);
    CHECK(h.drive_sign_after == -1);
    const auto q = holonomic_rotate_step(deg_to_rad(10.0), 0.5, 0.0, -4.0);
    CHECK_FALSE(q.crosses_no_motion_line);
    CHECK(q.drive_sign_after == 1);
    CHECK_THROWS_AS(holonomic_rotate_step(0.1, 0.0), ValidationError);
  }

  TEST_CASE("elbow at the preferred orientation") {
    PlannerConfig cfg;
    cfg.elbow_mode = ElbowRatioMode::StandardBend;
    const auto elbow = PipeSegment::elbow(160.0, 90.0, kPi / 2.0);
    const auto steps = plan_elbow(elbow, 0.0, cfg, RobotGeometry{});
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].kind == StepKind::TurnElbow);
    CHECK(steps[0].module_speeds[1] / steps[0].module_speeds[0] == doctest::Approx(1.75));
    CHECK(steps[0].module_speeds[2] / steps[0].module_speeds[0] == doctest::Approx(1.75));
    CHECK(mean_speed(steps[0]) == doctest::Approx(100.0));
  }

  TEST_CASE("elbow from 60 deg rotates by -60 deg") {
    const PlannerConfig cfg;
    const auto elbow = PipeSegment::elbow(160.0, 90.0, kPi / 2.0);
    const auto steps = plan_elbow(elbow, deg_to_rad(60.0), cfg, RobotGeometry{});
    REQUIRE(steps.size() == 2);
    CHECK(steps[0].kind == StepKind::HolonomicRotate);
    CHECK(rad_to_deg(steps[0].rotation) == doctest::Approx(-60.0));
    CHECK(steps[1].theta5_before == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("elbow speeds follow path radii for any roll") {
    const RobotGeometry g;
    for (auto mode : {ElbowRatioMode::StandardBend, ElbowRatioMode::Generalized}) {
      PlannerConfig cfg;
      cfg.with_holonomic = false;
      cfg.elbow_mode = mode;
      const auto elbow = PipeSegment::elbow(160.0, 200.0, kPi / 3.0, 0.4);
      for (int k = 0; k < 360; k += 7) {
        const double t = deg_to_rad(k);
        const auto steps = plan_elbow(elbow, t, cfg, g);
        REQUIRE(steps.size() == 1);
        const auto r = module_path_radii(elbow, t, mode);
        const auto& v = steps[0].module_speeds;
        CHECK(std::abs(v[1] / v[0] - r[1] / r[0]) <= 1e-12 * (r[1] / r[0]));
        CHECK(std::abs(v[2] / v[0] - r[2] / r[0]) <= 1e-12 * (r[2] / r[0]));
        CHECK(mean_speed(steps[0]) == doctest::Approx(100.0).epsilon(1e-12));
        CHECK(forward_kinematics(steps[0].command, g).v_cz == doctest::Approx(100.0));
      }
    }
  }

  TEST_CASE("tee turn command reaches the equivalent radius") {
    const RobotGeometry g;
    const PlannerConfig cfg;
    const auto tee = PipeSegment::tee(160.0, TeeExit::Branch);
    for (int k = 0; k < 120; k += 5) {
      const double t = deg_to_rad(k);
      const CommandVector c = tee_turn_command(tee, t, cfg, g);
      const TwistVector tw = forward_kinematics(c, g);
      const auto rc = radius_of_curvature(module_linear_velocities(c, g), tw);
      REQUIRE(rc.kind() == CurvatureRadius::Kind::Finite);
      CHECK(rc.value() == doctest::Approx(80.0).epsilon(1e-9));
      CHECK(tw.v_cz == doctest::Approx(100.0));
      // Bending axis is perpendicular to the turn direction at roll -theta5.
      CHECK(tw.omega_x * std::cos(t) - tw.omega_y * std::sin(t) == doctest::Approx(0.0));
    }
    // At theta5 = 0 module 1 faces the turn and runs slowest.
    const CommandVector c = tee_turn_command(tee, 0.0, cfg, g);
    CHECK(c.theta_dot_1 < c.theta_dot_2);
    CHECK(c.theta_dot_2 == doctest::Approx(c.theta_dot_3));

    // A radius tighter than the robot's minimum has no solution.
    const auto tight = PipeSegment::tee(160.0, TeeExit::Branch, 0.0, 5.0);
    CHECK_THROWS_AS(tee_turn_command(tight, 0.0, cfg, g), PlanError);
  }

  TEST_CASE("tee plans") {
    const RobotGeometry g;
    const PlannerConfig cfg;
    const auto region = default_region();
    const auto tee = PipeSegment::tee(160.0, TeeExit::Branch);

    auto steps = plan_tee(tee, deg_to_rad(40.0), region, cfg, g);
    REQUIRE(steps.size() == 3);
    CHECK(steps[0].kind == StepKind::HolonomicRotate);
    CHECK(steps[0].rotation == doctest::Approx(escape_rotation(deg_to_rad(40.0), region)));
    CHECK(steps[1].kind == StepKind::Drive);
    CHECK(steps[1].completion == Completion::TriggerPoint);
    CHECK(steps[1].target_s == doctest::Approx(40.0));
    CHECK(steps[2].kind == StepKind::TurnTee);
    CHECK(steps[2].trigger.kind == Trigger::Kind::HeadReachesFractionOfD);
    CHECK(steps[2].trigger.fraction == 0.25);

    steps = plan_tee(tee, 0.0, region, cfg, g);
    REQUIRE(steps.size() == 2);
    CHECK(steps[0].kind == StepKind::Drive);

    const auto through = PipeSegment::tee(160.0, TeeExit::Through);
    steps = plan_tee(through, deg_to_rad(10.0), region, cfg, g);
    REQUIRE(steps.size() == 2);
    CHECK(steps[0].kind == StepKind::HolonomicRotate);
    CHECK(rad_to_deg(steps[0].theta5_after) == doctest::Approx(60.0));
    CHECK(steps[1].kind == StepKind::Drive);
    CHECK(steps[1].target_s == doctest::Approx(160.0));
  }

  TEST_CASE("turn onset is never singular and never on the no-motion line") {
    const RobotGeometry g;
    const auto region = default_region();
    const auto tee = PipeSegment::tee(160.0, TeeExit::Branch);
    for (bool align : {false, true}) {
      PlannerConfig cfg;
      cfg.align_tee = align;
      for (int k = 0; k < 3600; ++k) {
        PlanContext ctx;
        ctx.roll = deg_to_rad(0.1 * k);
        ctx.module_rotation = deg_to_rad(0.037 * k);
        if (on_no_motion_line(ctx.module_rotation, cfg.wobble_deadband)) continue;
        const auto steps = plan_tee(tee, region, cfg, g, ctx);
        const auto& turn = steps.back();
        REQUIRE(turn.kind == StepKind::TurnTee);
        CHECK_FALSE(in_singularity(turn.theta5_before, region));
        CHECK(turn.drive_sign_after != 0);
      }
    }
  }

  TEST_CASE("drive commands carry the module drive sign") {
    PlanContext ctx;
    ctx.module_rotation = kPi;  // modules upside down
    const auto s = plan_straight(100.0, PlannerConfig{}, RobotGeometry{}, ctx);
    CHECK(s.command.theta_dot_1 < 0.0);
    CHECK(s.drive_sign_after == -1);
    ctx.module_rotation = kPi / 2.0;
    CHECK_THROWS_AS(plan_straight(100.0, PlannerConfig{}, RobotGeometry{}, ctx), PlanError);
  }

  TEST_CASE("missions are deterministic") {
    const auto net = load_network(R"({"segments":[
      {"kind":"straight","D_mm":160,"length_mm":300},
      {"kind":"elbow","D_mm":160,"bend_radius_mm":90,"bend_angle_deg":90,"turn_plane_roll_deg":45},
      {"kind":"straight","D_mm":160,"length_mm":300},
      {"kind":"tee","D_mm":160,"branch_roll_deg":200,"exit":"branch"},
      {"kind":"straight","D_mm":160,"length_mm":300}]})");
    const auto a = plan_mission(net, 1.234, PlannerConfig{}, RobotGeometry{});
    const auto b = plan_mission(net, 1.234, PlannerConfig{}, RobotGeometry{});
    CHECK(a == b);
    for (const auto& s : a) {
      if (s.kind == StepKind::Drive || s.kind == StepKind::TurnElbow) {
        CHECK(std::abs(mean_speed(s)) == doctest::Approx(100.0));
      }
    }
  }

  TEST_CASE("config validation") {
    PlannerConfig cfg;
    cfg.tee_trigger_fraction = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.straight_speed = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.tee_trigger_fraction = 1.0;
    CHECK_NOTHROW(cfg.validate());
  }
}
