#include "quadspin/leg_kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quadspin/angles.hpp"

namespace quadspin {

Eigen::Vector3d forward_kinematics(const LegGeometry& geom,
                                   const JointAngles& alpha) {
  const double s1 = std::sin(alpha.alpha1), c1 = std::cos(alpha.alpha1);
  const double s2 = std::sin(alpha.alpha2), c2 = std::cos(alpha.alpha2);
  const double s23 = std::sin(alpha.alpha2 + alpha.alpha3);
  const double c23 = std::cos(alpha.alpha2 + alpha.alpha3);
  const double l2 = geom.l_thigh, l3 = geom.l_calf;
  return {s23 * l3 + s2 * l2,
          s1 * c23 * l3 + s1 * c2 * l2,
          -c1 * c23 * l3 - c1 * c2 * l2};
}

JointAngles inverse_kinematics(const LegGeometry& geom,
                               const Eigen::Vector3d& target,
                               KneeBranch branch) {
  const double l2 = geom.l_thigh, l3 = geom.l_calf;
  const double x = target.x(), y = target.y(), z = target.z();

  const double norm = target.norm();
  if (norm > geom.max_reach() + 1e-12 || norm < geom.min_reach() - 1e-12) {
    throw UnreachableError("inverse_kinematics: target norm " +
                           std::to_string(norm) + " outside reach annulus");
  }

  // Radial distance from the hip-roll (x) axis; the roll angle is
  // unobservable when the target sits on that axis.
  const double q = std::hypot(y, z);
  if (q < 1e-12) {
    throw SingularError(
        "inverse_kinematics: target on hip-roll axis, alpha1 undefined");
  }
  double a1 = std::atan2(y, -z);
  double rho = q;

  // The same point is also reached with the roll flipped by pi and the
  // leg folded through the hip-roll axis (negative radial coordinate).
  // When only the folded twin respects the hip-roll limit, prefer it.
  if (a1 < geom.limits.lower.x() || a1 > geom.limits.upper.x()) {
    const double flipped = a1 > 0.0 ? a1 - M_PI : a1 + M_PI;
    if (flipped >= geom.limits.lower.x() && flipped <= geom.limits.upper.x()) {
      a1 = flipped;
      rho = -q;
    }
  }

  // De-rolled sagittal plane: x stays, depth rho points down; two-link
  // solve. cos(a3) follows from the law of cosines on (x, rho).
  double d = (x * x + q * q - l2 * l2 - l3 * l3) / (2.0 * l2 * l3);
  d = std::clamp(d, -1.0, 1.0);  // reach already validated; absorb roundoff
  const double a3_mag = std::acos(d);
  const double a3 = (branch == KneeBranch::kBackward) ? -a3_mag : a3_mag;

  const double k1 = l2 + l3 * std::cos(a3);
  const double k2 = l3 * std::sin(a3);
  double a2 = std::atan2(x, rho) - std::atan2(k2, k1);
  if (rho < 0.0) a2 = wrap_angle(a2);

  return {a1, a2, a3};
}

}  // namespace quadspin
