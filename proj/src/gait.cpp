#include "quadspin/gait.hpp"

#include <algorithm>
#include <cmath>

#include "quadspin/angles.hpp"
#include "quadspin/errors.hpp"

namespace quadspin {
namespace {

double frac(double x) { return x - std::floor(x); }

}  // namespace

GaitScheduler::GaitScheduler(const GaitConfig& config) : config_(config) {
  if (config_.cycle_period <= 0.0 || config_.duty <= 0.0 ||
      config_.duty >= 1.0) {
    throw ConfigError("gait: cycle_period must be > 0 and duty in (0,1)");
  }
}

double GaitScheduler::clock() const {
  return t_ / config_.cycle_period + 1e-9;
}

bool GaitScheduler::advance(double dt) {
  const long before = step_index();
  t_ += dt;
  return step_index() > before;
}

long GaitScheduler::step_index() const {
  return static_cast<long>(std::floor(2.0 * clock()));
}

double GaitScheduler::step_duration() const {
  return 0.5 * config_.cycle_period;
}

double GaitScheduler::master_phase() const { return frac(clock()); }

double GaitScheduler::leg_phase(Leg leg) const {
  return frac(clock() + kTrotOffsets[leg]);
}

bool GaitScheduler::in_stance(Leg leg) const {
  return leg_phase(leg) < config_.duty;
}

double GaitScheduler::stance_progress(Leg leg) const {
  const double s = leg_phase(leg) / config_.duty;
  return std::clamp(s, 0.0, 1.0);
}

double GaitScheduler::swing_progress(Leg leg) const {
  const double s = (leg_phase(leg) - config_.duty) / (1.0 - config_.duty);
  return std::clamp(s, 0.0, 1.0);
}

std::array<Leg, 2> GaitScheduler::landing_pair(long index) {
  return (index % 2 == 0) ? std::array<Leg, 2>{kFR, kBL}
                          : std::array<Leg, 2>{kFL, kBR};
}

std::array<Leg, 2> GaitScheduler::stance_pair() const {
  return landing_pair(step_index());
}

std::array<Leg, 2> GaitScheduler::swing_pair() const {
  return landing_pair(step_index() + 1);
}

Eigen::Vector3d translation_step(double radius, double gamma) {
  return {radius * std::sin(gamma), radius * (1.0 - std::cos(gamma)), 0.0};
}

Eigen::Vector3d rotation_step(const LegGeometry& geom, Leg leg,
                              double gamma) {
  const Eigen::Vector3d offset = geom.hip_offset(leg);
  Eigen::Vector3d out;
  out.head<2>() = rot2(gamma) * offset.head<2>();
  out.z() = offset.z();
  return out;
}

Eigen::Vector3d plan_foothold(const LegGeometry& geom, Leg leg,
                              const Eigen::Vector2d& body_xy, double yaw,
                              double radius, double gamma) {
  // Arc translation plus the post-yaw hip position, expressed in the
  // current body frame, then rotated into the world. Reduces to the hip
  // projection when radius and gamma are both zero.
  const Eigen::Vector3d local =
      translation_step(radius, gamma) + rotation_step(geom, leg, gamma);
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  out.head<2>() = body_xy + rot2(yaw) * local.head<2>();
  return out;
}

Eigen::Vector3d swing_position(const Eigen::Vector3d& from,
                               const Eigen::Vector3d& to, double height,
                               double s) {
  s = std::clamp(s, 0.0, 1.0);
  const double two_pi = 2.0 * M_PI;
  const double along = s - std::sin(two_pi * s) / two_pi;
  const double bump = 0.5 * height * (1.0 - std::cos(two_pi * s));
  Eigen::Vector3d out = from + along * (to - from);
  out.z() += bump;
  return out;
}

}  // namespace quadspin
