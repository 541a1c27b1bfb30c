#include "quadspin/ball_foot.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "quadspin/errors.hpp"

namespace quadspin {
namespace {

// The tilt angle printed alongside the rolling model is acos(-c1*c23),
// which evaluates to pi for a straight-down calf where the offset must
// vanish. Calibrate the convention once by probing a vertical-calf pose
// and keeping the variant that reports zero tilt there.
bool tilt_needs_flip() {
  static const bool flip = [] {
    const JointAngles vertical{0.0, 0.4, -0.4};  // alpha2 + alpha3 = 0
    const double c1c23 = std::cos(vertical.alpha1) *
                         std::cos(vertical.alpha2 + vertical.alpha3);
    const double raw = std::acos(std::clamp(-c1c23, -1.0, 1.0));
    return std::abs(M_PI - raw) < std::abs(raw);
  }();
  return flip;
}

// Offset from the point-foot reference position to (real contact + delta);
// the implicit part of the corrected-IK equation.
Eigen::Vector3d contact_correction(const LegGeometry& geom,
                                   const JointAngles& alpha) {
  const RollingOffset roll = rolling_offset(geom, alpha);
  const Eigen::Vector3d d = calf_axis(alpha);
  return -geom.foot_radius * d +
         Eigen::Vector3d(0, 0, -geom.foot_radius) + roll.delta;
}

}  // namespace

Eigen::Vector3d calf_axis(const JointAngles& alpha) {
  const double s1 = std::sin(alpha.alpha1), c1 = std::cos(alpha.alpha1);
  const double s23 = std::sin(alpha.alpha2 + alpha.alpha3);
  const double c23 = std::cos(alpha.alpha2 + alpha.alpha3);
  return {s23, s1 * c23, -c1 * c23};  // unit by construction
}

double calf_tilt(const JointAngles& alpha) {
  const double c1c23 = std::cos(alpha.alpha1) *
                       std::cos(alpha.alpha2 + alpha.alpha3);
  const double raw = std::acos(std::clamp(-c1c23, -1.0, 1.0));
  return tilt_needs_flip() ? M_PI - raw : raw;
}

RollingOffset rolling_offset(const LegGeometry& geom,
                             const JointAngles& alpha) {
  RollingOffset out;
  out.phi = calf_tilt(alpha);

  const double s1 = std::sin(alpha.alpha1);
  const double s23 = std::sin(alpha.alpha2 + alpha.alpha3);
  const double c23 = std::cos(alpha.alpha2 + alpha.alpha3);
  const double hx = s23, hy = s1 * c23;  // horizontal calf-axis projection
  const double h = std::hypot(hx, hy);
  if (h < 1e-14) {
    out.delta.setZero();  // vertical (or perfectly folded) calf: no offset
    return out;
  }
  const double arc = geom.foot_radius * out.phi;
  out.delta = {-arc * hx / h, -arc * hy / h, 0.0};
  return out;
}

Eigen::Vector3d ball_center(const LegGeometry& geom,
                            const JointAngles& alpha) {
  return forward_kinematics(geom, alpha) -
         geom.foot_radius * calf_axis(alpha);
}

Eigen::Vector3d real_contact_point(const LegGeometry& geom,
                                   const JointAngles& alpha) {
  return ball_center(geom, alpha) +
         Eigen::Vector3d(0, 0, -geom.foot_radius);
}

ContactPair contact_pair(const LegGeometry& geom, const JointAngles& alpha) {
  const Eigen::Vector3d real = real_contact_point(geom, alpha);
  return {real, real + rolling_offset(geom, alpha).delta};
}

CorrectedIkResult corrected_inverse_kinematics(
    const LegGeometry& geom, const Eigen::Vector3d& ideal_foothold,
    KneeBranch branch) {
  constexpr int kMaxIterations = 50;
  constexpr double kResidualTol = 1e-7;

  CorrectedIkResult out;
  out.alpha = inverse_kinematics(geom, ideal_foothold, branch);
  if (geom.foot_radius == 0.0) {
    return out;  // point foot: correction is identically zero
  }

  auto residual_of = [&](const JointAngles& a) -> Eigen::Vector3d {
    return forward_kinematics(geom, a) + contact_correction(geom, a) -
           ideal_foothold;
  };

  // Fixed point: a <- IK(ideal - correction(a)). Contracts with ratio
  // ~ r / leg length over the foothold workspace.
  JointAngles a = out.alpha;
  for (int k = 0; k < kMaxIterations; ++k) {
    ++out.iterations;
    const JointAngles next = inverse_kinematics(
        geom, ideal_foothold - contact_correction(geom, a), branch);
    const double step = (next.vec() - a.vec()).lpNorm<Eigen::Infinity>();
    a = next;
    if (step < 1e-13) break;
  }
  out.alpha = a;
  out.residual = residual_of(a);
  if (out.residual.norm() < kResidualTol) return out;

  // Damped Newton on the full residual for postures where the fixed point
  // does not contract (deep folds near the workspace rim).
  Eigen::Vector3d av = a.vec();
  for (int k = 0; k < kMaxIterations; ++k) {
    ++out.iterations;
    const Eigen::Vector3d f0 = residual_of(JointAngles::from_vec(av));
    if (f0.norm() < 1e-12) break;
    Eigen::Matrix3d jac;
    const double eps = 1e-7;
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d ap = av, am = av;
      ap[j] += eps;
      am[j] -= eps;
      jac.col(j) = (residual_of(JointAngles::from_vec(ap)) -
                    residual_of(JointAngles::from_vec(am))) /
                   (2.0 * eps);
    }
    const Eigen::Vector3d full_step = jac.partialPivLu().solve(-f0);
    if (!full_step.allFinite()) break;
    double lambda = 1.0;
    Eigen::Vector3d accepted = av;
    for (; lambda > 1e-4; lambda *= 0.5) {
      const Eigen::Vector3d trial = av + lambda * full_step;
      if (residual_of(JointAngles::from_vec(trial)).norm() < f0.norm()) {
        accepted = trial;
        break;
      }
    }
    if ((accepted - av).norm() == 0.0) break;  // line search stalled
    av = accepted;
  }
  out.alpha = JointAngles::from_vec(av);
  out.residual = residual_of(out.alpha);
  if (out.residual.norm() >= kResidualTol) {
    throw NoConvergenceError(
        "corrected_inverse_kinematics: residual " +
        std::to_string(out.residual.norm()) + " m after " +
        std::to_string(out.iterations) + " iterations");
  }
  return out;
}

}  // namespace quadspin
