#pragma once

#include <Eigen/Core>

#include "quadspin/leg_kinematics.hpp"

namespace quadspin {

// Rolling migration of the spherical foot's ground contact, expressed in
// the hip-root frame. phi is the tilt of the calf link away from vertical;
// the offset is horizontal (delta.z == 0) with ||delta|| = r * phi, lying
// in the vertical plane that contains the calf axis.
struct RollingOffset {
  Eigen::Vector3d delta{0, 0, 0};
  double phi = 0.0;
};

// Unit vector along the calf link (knee -> foot tip).
Eigen::Vector3d calf_axis(const JointAngles& alpha);

// Tilt of the calf link away from straight-down, in [0, pi]. The sign
// convention inside is calibrated once at startup so that a vertical calf
// reports phi = 0 (see rolling_offset).
double calf_tilt(const JointAngles& alpha);

RollingOffset rolling_offset(const LegGeometry& geom,
                             const JointAngles& alpha);

// Center of the foot sphere. The point-foot reference position is the far
// surface point of the sphere along the calf axis, so the center sits
// foot_radius back up the calf from forward_kinematics(alpha).
Eigen::Vector3d ball_center(const LegGeometry& geom, const JointAngles& alpha);

// Ground contact of the sphere resting on the local plane: directly below
// the ball center by foot_radius. With a vertical calf this coincides with
// the point-foot reference position.
Eigen::Vector3d real_contact_point(const LegGeometry& geom,
                                   const JointAngles& alpha);

// Real contact paired with the ideal foothold it has rolled away from:
// ideal = real + delta.
struct ContactPair {
  Eigen::Vector3d real_contact;
  Eigen::Vector3d ideal_foothold;
};
ContactPair contact_pair(const LegGeometry& geom, const JointAngles& alpha);

struct CorrectedIkResult {
  JointAngles alpha;
  Eigen::Vector3d residual{0, 0, 0};  // real_contact + delta - ideal
  int iterations = 0;
};

// Joint angles that place the rolled contact point at the ideal foothold:
// solves real_contact(a) + delta(a) = ideal. The map is implicit in a, so
// we iterate plain IK on a correction-shifted target starting from the
// point-foot solution (the one-shot closed form is exactly the first
// iterate); a damped Newton fallback covers the rare non-contracting
// postures. Residual tolerance 1e-7 m, at most 50 iterations.
//
// With foot_radius = 0 the correction vanishes and the result equals plain
// inverse_kinematics bit for bit.
//
// Throws UnreachableError / NoConvergenceError.
CorrectedIkResult corrected_inverse_kinematics(
    const LegGeometry& geom, const Eigen::Vector3d& ideal_foothold,
    KneeBranch branch = KneeBranch::kBackward);

}  // namespace quadspin
