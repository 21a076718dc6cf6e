#include "omnipipe/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "omnipipe/angles.hpp"
#include "omnipipe/error.hpp"
#include "omnipipe/kernels.hpp"

namespace omnipipe {

double ellipse_radial_distance(const EllipseSection& e, double psi) {
  const double a = e.semi_major_a;
  const double b = e.semi_minor_b;
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  return a * b / std::sqrt(b * b * c * c + a * a * s * s);
}

EllipseSection cross_section_at(double diameter, double phi) {
  if (!(diameter > 0.0)) throw InvalidSection("pipe diameter must be > 0");
  if (!(phi >= 0.0 && phi < kPi / 2.0)) {
    throw InvalidSection("cut tilt must lie in [0, 90) deg; got " +
                         std::to_string(rad_to_deg(phi)));
  }
  const double b = diameter / 2.0;
  const double c = std::cos(phi);
  if (!(c > 0.0)) throw InvalidSection("cut plane parallel to the pipe axis");
  return {b / c, b, phi};
}

std::optional<double> contact_loss_half_width_deg(const EllipseSection& e, double reach_max) {
  const double a = e.semi_major_a;
  const double b = e.semi_minor_b;
  if (reach_max < b) {
    throw InsufficientReach("reach_max " + std::to_string(reach_max) +
                            " mm is below the section's semi-minor axis " + std::to_string(b) +
                            " mm");
  }
  if (reach_max >= a) return std::nullopt;
  // Boundary where r(psi) = reach: b^2 cos^2 + a^2 sin^2 = (ab / reach)^2,
  // a linear equation in cos^2 psi.
  const double a2 = a * a;
  const double b2 = b * b;
  const double cos2 = a2 * (1.0 - b2 / (reach_max * reach_max)) / (a2 - b2);
  return rad_to_deg(std::acos(std::sqrt(std::clamp(cos2, 0.0, 1.0))));
}

AngleIntervalSet contact_loss_arcs(const EllipseSection& e, double reach_max) {
  AngleIntervalSet arcs(360.0);
  const auto w = contact_loss_half_width_deg(e, reach_max);
  if (!w) return arcs;
  arcs.add(-*w, *w);
  arcs.add(180.0 - *w, 180.0 + *w);
  return arcs;
}

SingularityRegion orientation_forbidden_set(const AngleIntervalSet& arcs) {
  SingularityRegion region;
  region.forbidden_arcs = arcs;
  for (const auto& iv : arcs.intervals()) {
    // Module 1 at psi <=> theta5 = psi - 90; the other modules repeat it every
    // 120 deg, which the 120-periodic set absorbs.
    region.orientation_forbidden.add(iv.lo - kTurnDirectionOnSectionDeg,
                                     iv.hi - kTurnDirectionOnSectionDeg);
  }
  region.sector_measure_deg = region.orientation_forbidden.measure();
  region.free_margin_deg = (kOrientationPeriodDeg - region.sector_measure_deg) / 2.0;
  return region;
}

double default_tee_phi_max(double main_diameter, double branch_diameter) {
  if (!(main_diameter > 0.0) || !(branch_diameter > 0.0)) {
    throw InvalidSection("tee diameters must be > 0");
  }
  return std::atan(branch_diameter / main_diameter);
}

SingularityRegion sweep_t_junction(double diameter, const RobotGeometry& geom, double phi_max,
                                   int steps) {
  if (steps < 2) throw ValidationError("steps", "sweep needs at least 2 sections");
  AngleIntervalSet all_arcs(360.0);
  for (int k = 0; k < steps; ++k) {
    const double phi = phi_max * static_cast<double>(k) / static_cast<double>(steps - 1);
    all_arcs.add(contact_loss_arcs(cross_section_at(diameter, phi), geom.reach_max));
  }
  return orientation_forbidden_set(all_arcs);
}

bool in_singularity(double theta5, const SingularityRegion& region) {
  return region.orientation_forbidden.contains(rad_to_deg(theta5));
}

double escape_rotation(double theta5, const SingularityRegion& region) {
  constexpr double kCenteredTolDeg = 1e-9;
  const auto gaps = region.orientation_forbidden.gaps();
  if (gaps.empty()) throw NoEscape("every robot orientation lies in the singularity region");
  const double theta_deg = wrap_positive(rad_to_deg(theta5), kOrientationPeriodDeg);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& gap : gaps) {
    // An empty region has one full-period gap starting at 0; its center is
    // taken as the preferred orientation 0 rather than 60.
    const double center =
        region.orientation_forbidden.empty() ? 0.0 : gap.center(kOrientationPeriodDeg);
    double delta = wrap_signed(center - theta_deg, kOrientationPeriodDeg);
    if (std::abs(delta) <= kCenteredTolDeg) delta = 0.0;
    const double mag = std::abs(delta);
    const double best_mag = std::abs(best);
    if (mag < best_mag - kCenteredTolDeg ||
        (std::abs(mag - best_mag) <= kCenteredTolDeg && delta > best)) {
      best = delta;
    }
  }
  return deg_to_rad(best);
}

double failure_probability(const SingularityRegion& region) {
  return std::clamp(region.sector_measure_deg / kOrientationPeriodDeg, 0.0, 1.0);
}

double calibrate_reach_max(double diameter, double target_sector_deg, double phi_max, int steps,
                           double tol_deg) {
  if (!(target_sector_deg >= 0.0 && target_sector_deg <= kOrientationPeriodDeg)) {
    throw ValidationError("target_sector_deg", "must lie in [0, 120]");
  }
  const double b = diameter / 2.0;
  const double a = cross_section_at(diameter, phi_max).semi_major_a;
  auto sector = [&](double reach) {
    RobotGeometry g;
    g.reach_max = reach;
    return sweep_t_junction(diameter, g, phi_max, steps).sector_measure_deg;
  };
  double lo = b;  // sector is largest here
  double hi = a;  // sector is zero here
  if (sector(lo) < target_sector_deg) {
    throw InsufficientReach("target sector exceeds what any admissible reach produces");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = sector(mid);
    if (std::abs(s - target_sector_deg) <= tol_deg) return mid;
    if (s > target_sector_deg) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double sampled_sector_measure(const EllipseSection& e, double reach_max, int samples) {
  if (samples < 1) throw ValidationError("samples", "must be >= 1");
  const auto n = static_cast<std::size_t>(samples);
  std::vector<double> c(n);
  std::vector<double> s(n);
  std::vector<std::uint8_t> mask(n, 0);
  const double a2 = e.semi_major_a * e.semi_major_a;
  const double b2 = e.semi_minor_b * e.semi_minor_b;
  const double reach2 = reach_max * reach_max;
  for (int module = 0; module < 3; ++module) {
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = kOrientationPeriodDeg * (static_cast<double>(i) + 0.5) /
                           static_cast<double>(n);
      const double psi = deg_to_rad(theta + kTurnDirectionOnSectionDeg + 120.0 * module);
      c[i] = std::cos(psi);
      s[i] = std::sin(psi);
    }
    kernels::mark_beyond_reach(c, s, a2, b2, reach2, mask);
  }
  std::size_t hits = 0;
  for (auto m : mask) hits += m;
  return kOrientationPeriodDeg * static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace omnipipe
