#include "omnipipe/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "omnipipe/error.hpp"
#include "omnipipe/kernels.hpp"

namespace omnipipe {
namespace {

const double kCos30 = std::sqrt(3.0) / 2.0;
constexpr double kSin30 = 0.5;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidGeometry(std::string(name) + " must be finite and > 0");
  }
}

std::array<double, 4> apply(const Eigen::Matrix4d& j, const std::array<double, 4>& x) {
  // Fixed summation order; the batch kernels reproduce it bit for bit.
  std::array<double, 4> y{};
  for (int k = 0; k < 4; ++k) {
    double acc = j(k, 0) * x[0];
    acc = acc + j(k, 1) * x[1];
    acc = acc + j(k, 2) * x[2];
    acc = acc + j(k, 3) * x[3];
    y[k] = acc;
  }
  return y;
}

}  // namespace

RobotGeometry RobotGeometry::symmetric(double lug_radius, double arm_length) {
  RobotGeometry g;
  g.lug_radius = lug_radius;
  g.arm_length = arm_length;
  g.a_offset = arm_length / 2.0;
  g.reach_min = std::min(g.reach_min, arm_length);
  g.reach_max = std::max(g.reach_max, arm_length);
  return g;
}

void RobotGeometry::validate() const {
  require_positive(lug_radius, "lug_radius");
  require_positive(arm_length, "arm_length");
  require_positive(a_offset, "a_offset");
  require_positive(reach_min, "reach_min");
  require_positive(reach_max, "reach_max");
  require_positive(module_outer_radius, "module_outer_radius");
  if (!(reach_min <= arm_length && arm_length <= reach_max)) {
    throw InvalidGeometry("arm_length must lie within [reach_min, reach_max]");
  }
}

bool CommandVector::finite() const {
  return std::isfinite(theta_dot_1) && std::isfinite(theta_dot_2) && std::isfinite(theta_dot_3) &&
         std::isfinite(theta_dot_4);
}

bool TwistVector::finite() const {
  return std::isfinite(omega_x) && std::isfinite(omega_y) && std::isfinite(omega_z) &&
         std::isfinite(v_cz);
}

ModuleVelocities module_linear_velocities(const CommandVector& cmd, const RobotGeometry& geom) {
  ModuleVelocities mv;
  mv.v = {geom.lug_radius * cmd.theta_dot_1, geom.lug_radius * cmd.theta_dot_2,
          geom.lug_radius * cmd.theta_dot_3};
  mv.arm = {geom.arm_length, geom.arm_length, geom.arm_length};
  return mv;
}

Vec3 coriolis_transform(const Vec3& vec_in_rotating_frame, const Vec3& position_of_point,
                        double theta_dot_4) {
  return vec_in_rotating_frame + Vec3(0.0, 0.0, theta_dot_4).cross(position_of_point);
}

Vec3 coriolis_module_position(int module, double arm_length) {
  switch (module) {
    case 0: return {arm_length, 0.0, 0.0};
    case 1: return {-arm_length * kSin30, arm_length * kCos30, 0.0};
    case 2: return {-arm_length * kSin30, -arm_length * kCos30, 0.0};
    default: throw std::out_of_range("module index must be 0, 1 or 2");
  }
}

Vec3 center_velocity(const ModuleVelocities& mv, double theta_dot_4) {
  Vec3 sum = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    sum += coriolis_transform(Vec3(0.0, 0.0, mv.v[i]), coriolis_module_position(i, mv.arm[i]),
                              theta_dot_4);
  }
  return sum / 3.0;
}

Eigen::Matrix4d jacobian(const RobotGeometry& geom) {
  const double r = geom.lug_radius;
  // Angular-velocity gain of one module's translation about the line through
  // the other two: r / (a + l). With a = l/2 this is 2r / 3l.
  const double k = r / (geom.a_offset + geom.arm_length);
  Eigen::Matrix4d j;
  // clang-format off
  j << 0.0,     -kCos30 * k, kCos30 * k, 0.0,
       -k,      kSin30 * k,  kSin30 * k, 0.0,
       0.0,     0.0,         0.0,        1.0,
       r / 3.0, r / 3.0,     r / 3.0,    0.0;
  // clang-format on
  return j;
}

TwistVector forward_kinematics(const CommandVector& cmd, const RobotGeometry& geom) {
  return TwistVector::from_array(omnipipe::apply(jacobian(geom), cmd.as_array()));
}

std::vector<TwistVector> forward_kinematics_batch(std::span<const CommandVector> cmds,
                                                  const RobotGeometry& geom) {
  const std::size_t n = cmds.size();
  std::vector<double> in(4 * n);
  std::vector<double> out(4 * n);
  for (std::size_t i = 0; i < n; ++i) {
    in[i] = cmds[i].theta_dot_1;
    in[n + i] = cmds[i].theta_dot_2;
    in[2 * n + i] = cmds[i].theta_dot_3;
    in[3 * n + i] = cmds[i].theta_dot_4;
  }
  const Eigen::Matrix<double, 4, 4, Eigen::RowMajor> j = jacobian(geom);
  const std::span<const double, 16> m(j.data(), 16);
  const std::span<const double> src(in);
  const std::span<double> dst(out);
  kernels::mat4_apply(m, {src.subspan(0, n), src.subspan(n, n), src.subspan(2 * n, n),
                          src.subspan(3 * n, n)},
                      {dst.subspan(0, n), dst.subspan(n, n), dst.subspan(2 * n, n),
                       dst.subspan(3 * n, n)});
  std::vector<TwistVector> twists(n);
  for (std::size_t i = 0; i < n; ++i) {
    twists[i] = {out[i], out[n + i], out[2 * n + i], out[3 * n + i]};
  }
  return twists;
}

CommandVector inverse_kinematics(const TwistVector& twist, const RobotGeometry& geom) {
  if (!(geom.lug_radius > 0.0) || !(geom.arm_length > 0.0) ||
      !(geom.a_offset + geom.arm_length > 0.0)) {
    throw InvalidGeometry("Jacobian is singular: lug_radius and arm_length must be > 0");
  }
  const Eigen::Matrix4d j = jacobian(geom);
  const Eigen::FullPivLU<Eigen::Matrix4d> lu(j);
  if (!lu.isInvertible()) throw InvalidGeometry("Jacobian is singular");
  const auto t = twist.as_array();
  const Eigen::Vector4d x = lu.solve(Eigen::Vector4d(t[0], t[1], t[2], t[3]));
  return {x[0], x[1], x[2], x[3]};
}

CurvatureRadius CurvatureRadius::infinite() {
  return {Kind::Infinite, std::numeric_limits<double>::infinity()};
}

CurvatureRadius CurvatureRadius::undefined() {
  return {Kind::Undefined, std::numeric_limits<double>::quiet_NaN()};
}

CurvatureRadius radius_of_curvature(const ModuleVelocities& mv, const TwistVector& twist) {
  const double speed_sum = std::abs(mv.v[0]) + std::abs(mv.v[1]) + std::abs(mv.v[2]);
  const double omega = std::sqrt(twist.omega_x * twist.omega_x + twist.omega_y * twist.omega_y +
                                 twist.omega_z * twist.omega_z);
  if (omega < kStraightOmegaTolerance) {
    return speed_sum == 0.0 ? CurvatureRadius::undefined() : CurvatureRadius::infinite();
  }
  return CurvatureRadius::finite(speed_sum / (3.0 * omega));
}

}  // namespace omnipipe
