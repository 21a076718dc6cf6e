#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "omnipipe/error.hpp"
#include "omnipipe/kernels.hpp"
#include "omnipipe/kinematics.hpp"
#include "oracles.hpp"

using namespace omnipipe;

namespace {

double rel_err(double got, double want) {
  const double scale = std::max(1.0, std::abs(want));
  return std::abs(got - want) / scale;
}

}  // namespace

TEST_SUITE("kinematics") {
  TEST_CASE("module linear velocities scale by lug radius") {
    const RobotGeometry g;
    auto mv = module_linear_velocities({2, 2, 2, 0}, g);
    CHECK(mv.v[0] == 30.0);
    CHECK(mv.v[2] == 30.0);
    mv = module_linear_velocities({1, 2, 3, 0}, g);
    CHECK(mv.v[0] == 15.0);
    CHECK(mv.v[1] == 30.0);
    CHECK(mv.v[2] == 45.0);
    CHECK(mv.arm[1] == g.arm_length);
    mv = module_linear_velocities({0, 0, 0, 4}, g);
    CHECK(mv.v == std::array<double, 3>{0, 0, 0});
  }

  TEST_CASE("forward kinematics worked values") {
    const auto g = RobotGeometry::symmetric(15.0, 60.0);
    const TwistVector t = forward_kinematics({1, 2, 3, 0}, g);
    CHECK(t.omega_x == doctest::Approx(0.14433756729740643).epsilon(1e-14));
    CHECK(t.omega_y == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(t.omega_z == 0.0);
    CHECK(t.v_cz == doctest::Approx(30.0).epsilon(1e-14));
    const TwistVector s = forward_kinematics({2, 2, 2, 0}, g);
    CHECK(s.omega_x == 0.0);
    CHECK(s.omega_y == 0.0);
    CHECK(s.v_cz == 30.0);
  }

  TEST_CASE("forward kinematics matches geometric oracle on random commands") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> cmd(-20.0, 20.0);
    std::uniform_real_distribution<double> len(5.0, 100.0);
    for (int n = 0; n < 2000; ++n) {
      RobotGeometry g;
      g.lug_radius = len(rng);
      g.arm_length = len(rng);
      g.a_offset = len(rng);
      const std::array<double, 4> c = {cmd(rng), cmd(rng), cmd(rng), cmd(rng)};
      const auto want = oracle::twist(c, g.lug_radius, g.arm_length, g.a_offset);
      const auto got = forward_kinematics(CommandVector::from_array(c), g).as_array();
      for (int k = 0; k < 4; ++k) CHECK(rel_err(got[k], want[k]) < 1e-12);
    }
  }

  TEST_CASE("inverse kinematics round trip") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    const RobotGeometry g;
    for (int n = 0; n < 1000; ++n) {
      const CommandVector c{u(rng), u(rng), u(rng), u(rng)};
      const CommandVector back = inverse_kinematics(forward_kinematics(c, g), g);
      const auto a = c.as_array();
      const auto b = back.as_array();
      for (int k = 0; k < 4; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-9);
    }
    const CommandVector ik = inverse_kinematics({0, 0, 5, 0}, g);
    CHECK(std::abs(ik.theta_dot_1) < 1e-15);
    CHECK(ik.theta_dot_4 == doctest::Approx(5.0));
  }

  TEST_CASE("jacobian determinant closed form") {
    for (double r : {5.0, 15.0, 40.0}) {
      for (double l : {30.0, 60.0, 90.0}) {
        const Eigen::Matrix4d j = jacobian(RobotGeometry::symmetric(r, l));
        // Cofactor expansion along the third row, whose only entry is j(2, 3) = 1.
        const Eigen::Matrix3d m{{j(0, 0), j(0, 1), j(0, 2)},
                                {j(1, 0), j(1, 1), j(1, 2)},
                                {j(3, 0), j(3, 1), j(3, 2)}};
        const double cofactor = -(m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                                  m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                                  m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)));
        const double closed = 2.0 * std::sqrt(3.0) * r * r * r / (9.0 * l * l);
        CHECK(cofactor == doctest::Approx(closed).epsilon(1e-12));
        CHECK(j.determinant() == doctest::Approx(closed).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("degenerate geometry is rejected") {
    RobotGeometry g;
    g.lug_radius = 0.0;
    CHECK_THROWS_AS(inverse_kinematics({1, 0, 0, 0}, g), InvalidGeometry);
    CHECK_THROWS_AS(g.validate(), InvalidGeometry);
    RobotGeometry h;
    h.reach_max = h.arm_length - 1.0;
    CHECK_THROWS_AS(h.validate(), InvalidGeometry);
    CHECK_NOTHROW(RobotGeometry{}.validate());
  }

  TEST_CASE("radius of curvature") {
    const RobotGeometry g;
    for (double w : {0.5, 3.0, -7.0}) {
      const CommandVector c{w, w, w, 0};
      const auto rc = radius_of_curvature(module_linear_velocities(c, g), forward_kinematics(c, g));
      CHECK(rc.kind() == CurvatureRadius::Kind::Infinite);
    }
    const CommandVector zero{};
    CHECK(radius_of_curvature(module_linear_velocities(zero, g), forward_kinematics(zero, g)).kind() ==
          CurvatureRadius::Kind::Undefined);

    const CommandVector c{1, 2, 3, 0};
    const auto base = radius_of_curvature(module_linear_velocities(c, g), forward_kinematics(c, g));
    REQUIRE(base.kind() == CurvatureRadius::Kind::Finite);
    // (15 + 30 + 45) / (3 * |(0.1443, 0.25)|)
    CHECK(base.value() == doctest::Approx(90.0 / (3.0 * std::hypot(0.14433756729740643, 0.25))));
    for (double k : {0.25, 2.0, 1000.0}) {
      const CommandVector s{k * 1, k * 2, k * 3, 0};
      const auto scaled =
          radius_of_curvature(module_linear_velocities(s, g), forward_kinematics(s, g));
      CHECK(scaled.value() == doctest::Approx(base.value()).epsilon(1e-12));
    }
  }

  TEST_CASE("coriolis transform and center velocity") {
    const Vec3 v = coriolis_transform({0, 0, 10}, {60, 0, 0}, 2.0);
    CHECK(v.x() == 0.0);
    CHECK(v.y() == 120.0);
    CHECK(v.z() == 10.0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int n = 0; n < 1000; ++n) {
      ModuleVelocities mv{{u(rng), u(rng), u(rng)}, {60, 60, 60}};
      const Vec3 c = center_velocity(mv, u(rng));
      CHECK(std::hypot(c.x(), c.y()) < 1e-12);
      CHECK(c.z() == doctest::Approx((mv.v[0] + mv.v[1] + mv.v[2]) / 3.0));
    }

    ModuleVelocities uneven{{0, 0, 0}, {60, 55, 55}};
    const Vec3 c = center_velocity(uneven, 1.0);
    const auto want = oracle::center_velocity({0, 0, 0}, {60, 55, 55}, 1.0);
    CHECK(c.x() == doctest::Approx(want[0]).epsilon(1e-12));
    CHECK(c.y() == doctest::Approx(want[1]).epsilon(1e-12));
    CHECK(c.y() == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("batch forward kinematics is bit-identical to the single call") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-9.0, 9.0);
    std::vector<CommandVector> cmds(1003);
    for (auto& c : cmds) c = {u(rng), u(rng), u(rng), u(rng)};
    const RobotGeometry g;
    const auto batch = forward_kinematics_batch(cmds, g);
    REQUIRE(batch.size() == cmds.size());
    for (std::size_t i = 0; i < cmds.size(); ++i) CHECK(batch[i] == forward_kinematics(cmds[i], g));
  }
}
