#pragma once

#include <Eigen/Core>
#include <array>

#include "quadspin/errors.hpp"

namespace quadspin {

// Leg indices. Diagonal trot pairs are (FR, BL) and (FL, BR).
enum Leg : int { kFR = 0, kFL = 1, kBR = 2, kBL = 3 };
inline constexpr int kNumLegs = 4;
inline constexpr const char* kLegNames[kNumLegs] = {"fr", "fl", "br", "bl"};

// Which side the knee folds to: backward keeps alpha3 < 0 (mini-cheetah style).
enum class KneeBranch { kBackward, kForward };

struct JointLimits {
  Eigen::Vector3d lower{-0.8, -1.5, -2.6};
  Eigen::Vector3d upper{0.8, 1.5, -0.1};
  bool contains(const Eigen::Vector3d& alpha) const {
    return (alpha.array() >= lower.array()).all() &&
           (alpha.array() <= upper.array()).all();
  }
};

// Joint vector alpha = (hip roll, thigh pitch, knee pitch), radians.
struct JointAngles {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  Eigen::Vector3d vec() const { return {alpha1, alpha2, alpha3}; }
  static JointAngles from_vec(const Eigen::Vector3d& v) {
    return {v.x(), v.y(), v.z()};
  }
};

// Link lengths and body layout shared by every module.
//
// Hip-root frame convention used throughout: x forward, y lateral-left,
// z up; a foot below its hip has z < 0.
struct LegGeometry {
  double l_thigh = 0.215;      // m
  double l_calf = 0.20;        // m
  double foot_radius = 0.0225; // m, spherical foot; 0 = ideal point foot
  double body_length = 0.38;   // m, hip-to-hip
  double body_width = 0.10;    // m, hip-to-hip
  JointLimits limits{};

  // Hip position in the body frame; FR = (+L/2, -W/2, 0).
  Eigen::Vector3d hip_offset(int leg) const {
    const double hx = (leg == kFR || leg == kFL) ? 0.5 * body_length
                                                 : -0.5 * body_length;
    const double hy = (leg == kFR || leg == kBR) ? -0.5 * body_width
                                                 : 0.5 * body_width;
    return {hx, hy, 0.0};
  }

  double max_reach() const { return l_thigh + l_calf; }
  double min_reach() const { return std::abs(l_thigh - l_calf); }
};

// Point-foot reference position of the leg tip in the hip-root frame:
//   p = ( s23*L3 + s2*L2,
//         s1*c23*L3 + s1*c2*L2,
//        -c1*c23*L3 - c1*c2*L2 )
// with s1 = sin a1, s2 = sin a2, s23 = sin(a2+a3), etc.
Eigen::Vector3d forward_kinematics(const LegGeometry& geom,
                                   const JointAngles& alpha);

// Analytic inverse: hip roll from atan2(y, -z), then a planar two-link
// solve in the de-rolled sagittal plane. Every off-axis point has two
// roll solutions, pi apart with the leg folded through the axis; when the
// direct one violates the hip-roll limit and its folded twin does not,
// the folded twin is returned, so IK(FK(alpha)) = alpha across the whole
// limit box.
//
// Throws UnreachableError outside [ |L2-L3|, L2+L3 ], SingularError when
// the target lies on the hip-roll axis (y = z = 0, alpha1 unobservable).
JointAngles inverse_kinematics(const LegGeometry& geom,
                               const Eigen::Vector3d& target,
                               KneeBranch branch = KneeBranch::kBackward);

}  // namespace quadspin
