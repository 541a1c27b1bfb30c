#include "quadspin/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "quadspin/angles.hpp"
#include "quadspin/errors.hpp"

namespace quadspin {
namespace {

double point_to_segment_distance(const Eigen::Vector2d& p,
                                 const Eigen::Vector2d& a,
                                 const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 < 1e-18) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

Simulator::Simulator(const RunConfig& config)
    : config_(config),
      gait_(config.gait),
      terrain_(config.terrain),
      tracker_(config.lqr),
      rng_(config.sim.seed) {
  total_ticks_ = std::llround(config_.sim.duration_s / config_.sim.dt);
  lqr_every_ = std::max<long>(
      1, std::llround(config_.lqr.dt / config_.sim.dt));
  gamma_step_ = config_.turn.omega * gait_.step_duration();
  omega_ref_ = config_.turn.omega;
  v_ref_ = std::abs(config_.turn.omega) * config_.turn.radius;
  u_v_ = v_ref_;
  u_omega_ = omega_ref_;

  // Reference: spin about the start point, or the circle the commanded
  // arc traces (center 90 degrees to the left of the heading for a left
  // turn).
  const Eigen::Vector2d start = Eigen::Vector2d::Zero();
  if (config_.turn.radius <= 0.0) {
    path_ = ReferencePath::spin(start, config_.turn.omega, 0.0);
  } else {
    const double side = config_.turn.omega >= 0.0 ? 1.0 : -1.0;
    const Eigen::Vector2d center = start + side * config_.turn.radius *
                                               Eigen::Vector2d(0.0, 1.0);
    const double bearing = std::atan2(start.y() - center.y(),
                                      start.x() - center.x());
    path_ = ReferencePath::circle(center, config_.turn.radius,
                                  config_.turn.omega, bearing);
  }

  // Standing start: every foot under its hip on the true ground; the
  // support diagonal of step 0 is already loaded, the other pair is
  // about to swing toward its first planned foothold.
  body_.position = Eigen::Vector3d::Zero();
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const Eigen::Vector3d offset = config_.geometry.hip_offset(leg);
    const Eigen::Vector2d xy = offset.head<2>();  // yaw = 0
    foot_world_[leg] = {xy.x(), xy.y(), terrain_.height(xy.x(), xy.y())};
    anchor_[leg] = foot_world_[leg];
    swing_start_[leg] = foot_world_[leg];
    swing_target_[leg] = foot_world_[leg];
    contact_[leg] = true;
  }

  try {
    plane_ = fit_plane({anchor_.begin(), anchor_.end()});
  } catch (const DegenerateError&) {
    plane_ = TerrainPlane{};
  }
  body_.position.z() =
      config_.psp.standing_height + plane_.height_at(0.0, 0.0);
  const PostureTarget posture =
      posture_target(plane_in_yaw_frame(plane_, body_.yaw));
  body_.roll = posture.roll;
  body_.pitch = posture.pitch;

  for (Leg leg : gait_.swing_pair()) {
    contact_[leg] = false;
    swing_start_[leg] = foot_world_[leg];
    swing_target_[leg] = remap_foothold(
        plane_,
        plan_foothold(config_.geometry, leg, body_.position.head<2>(),
                      body_.yaw, config_.turn.radius, gamma_step_));
  }

  const SupportVertexSet vertices = support_vertices(
      foot_world_, contact_,
      {gait_.stance_progress(kFR), gait_.stance_progress(kFL),
       gait_.stance_progress(kBR), gait_.stance_progress(kBL)},
      config_.psp);
  const Eigen::Vector3d desired = desired_com(vertices, plane_, config_.psp);
  v_psp_ = (desired.head<2>() - body_.position.head<2>()) /
           config_.gait.cycle_period;

  for (Leg leg : gait_.stance_pair()) {
    delta_prev_[leg] = solve_stance_leg(leg).delta_world;
  }
  if (config_.lqr.enabled) {
    const PathPoint goal =
        path_.goal_point(body_.position.head<2>(), gait_.time());
    tracker_.relinearize(goal.heading, goal.speed);
  }
}

Eigen::Vector2d Simulator::hip_world_xy(int leg) const {
  return body_.position.head<2>() +
         rot2(body_.yaw) *
             config_.geometry.hip_offset(leg).head<2>();
}

Simulator::StanceSolution Simulator::solve_stance_leg(int leg) const {
  const Eigen::Vector2d local_xy =
      rot2(body_.yaw).transpose() *
      (anchor_[leg].head<2>() - hip_world_xy(leg));
  const Eigen::Vector3d target(local_xy.x(), local_xy.y(),
                               anchor_[leg].z() - body_.position.z());

  StanceSolution out;
  out.residual_world = Eigen::Vector2d::Zero();
  try {
    if (config_.fkm.enabled) {
      const CorrectedIkResult sol =
          corrected_inverse_kinematics(config_.geometry, target);
      out.delta_world =
          rot2(body_.yaw) *
          rolling_offset(config_.geometry, sol.alpha).delta.head<2>();
      out.residual_world = rot2(body_.yaw) * sol.residual.head<2>();
    } else {
      const JointAngles alpha = inverse_kinematics(config_.geometry, target);
      out.delta_world =
          rot2(body_.yaw) *
          rolling_offset(config_.geometry, alpha).delta.head<2>();
    }
  } catch (const UnreachableError& e) {
    throw FallDetectedError(
        std::string("stance leg ") + kLegNames[leg] +
            " can no longer reach its anchor (" + e.what() + ")",
        tick_);
  }
  return out;
}

Eigen::Vector2d Simulator::gaussian_pair() {
  // Box-Muller on explicitly constructed 53-bit uniforms, so the stream
  // is identical across standard libraries.
  const double u1 =
      (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
  const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0,1)
  const double rad = std::sqrt(-2.0 * std::log(u1));
  return {rad * std::cos(2.0 * M_PI * u2), rad * std::sin(2.0 * M_PI * u2)};
}

void Simulator::handle_touchdown() {
  // Landing impact: one seeded planar kick to the body per touchdown.
  if (config_.sim.noise_sigma > 0.0) {
    body_.position.head<2>() += config_.sim.noise_sigma * gaussian_pair();
  }

  // The just-landed pair becomes the support diagonal at its commanded
  // targets; the measured contact keeps the planned xy and picks up the
  // true ground height where the foot actually landed.
  for (Leg leg : gait_.stance_pair()) {
    const Eigen::Vector2d xy = swing_target_[leg].head<2>();
    const double z = terrain_.height(xy.x(), xy.y());
    foot_world_[leg] = {xy.x(), xy.y(), z};
    anchor_[leg] = foot_world_[leg];
    contact_[leg] = true;
  }

  try {
    plane_ = fit_plane({anchor_.begin(), anchor_.end()});
  } catch (const DegenerateError&) {
    // Keep the previous estimate until the footprint opens up again.
  }

  for (Leg leg : gait_.swing_pair()) {
    contact_[leg] = false;
    swing_start_[leg] = foot_world_[leg];
    swing_target_[leg] = remap_foothold(
        plane_,
        plan_foothold(config_.geometry, leg, body_.position.head<2>(),
                      body_.yaw, config_.turn.radius, gamma_step_));
  }

  const SupportVertexSet vertices = support_vertices(
      foot_world_, contact_,
      {gait_.stance_progress(kFR), gait_.stance_progress(kFL),
       gait_.stance_progress(kBR), gait_.stance_progress(kBL)},
      config_.psp);
  const Eigen::Vector3d desired = desired_com(vertices, plane_, config_.psp);
  v_psp_ = (desired.head<2>() - body_.position.head<2>()) /
           config_.gait.cycle_period;

  for (Leg leg : gait_.stance_pair()) {
    delta_prev_[leg] = solve_stance_leg(leg).delta_world;
  }
  if (config_.lqr.enabled) {
    const PathPoint goal =
        path_.goal_point(body_.position.head<2>(), gait_.time());
    tracker_.relinearize(goal.heading, goal.speed);
  }
}

void Simulator::refresh_correction() {
  const PathPoint goal =
      path_.goal_point(body_.position.head<2>(), gait_.time());
  const Eigen::Vector3d state(body_.position.x(), body_.position.y(),
                              body_.yaw);
  const Eigen::Vector3d reference(goal.position.x(), goal.position.y(),
                                  goal.heading);
  const Eigen::Vector2d u_tilde = tracker_.correction(state, reference);
  u_v_ = std::clamp(v_ref_ - u_tilde(0), -config_.lqr.v_max,
                    config_.lqr.v_max);
  u_omega_ = std::clamp(omega_ref_ - u_tilde(1), -config_.lqr.u2_max,
                        config_.lqr.u2_max);
}

void Simulator::apply_stance_kinematics() {
  Eigen::Vector2d injection = Eigen::Vector2d::Zero();
  const auto pair = gait_.stance_pair();
  for (Leg leg : pair) {
    const StanceSolution sol = solve_stance_leg(leg);
    const Eigen::Vector2d increment = sol.delta_world - delta_prev_[leg];
    delta_prev_[leg] = sol.delta_world;

    // The contact migrates by the rolling increment; the body soaks up
    // the mean of what the two rolling contacts impose.
    foot_world_[leg].head<2>() -= increment;
    foot_world_[leg].z() =
        terrain_.height(foot_world_[leg].x(), foot_world_[leg].y());
    if (config_.fkm.enabled) {
      injection -= 0.5 * sol.residual_world;
    } else {
      injection -= 0.5 * increment;
    }
  }
  body_.position.head<2>() += injection;
}

void Simulator::check_fall() const {
  if (std::abs(body_.roll) > config_.sim.fall_attitude_limit ||
      std::abs(body_.pitch) > config_.sim.fall_attitude_limit) {
    throw FallDetectedError("attitude limit exceeded", tick_);
  }
  const auto pair = gait_.stance_pair();
  const double d = point_to_segment_distance(
      body_.position.head<2>(), anchor_[pair[0]].head<2>(),
      anchor_[pair[1]].head<2>());
  if (d > config_.sim.fall_com_distance) {
    throw FallDetectedError(
        "body left the support diagonal band (distance " +
            std::to_string(d) + " m)",
        tick_);
  }
}

void Simulator::step() {
  const bool touchdown = gait_.advance(config_.sim.dt);
  if (touchdown) handle_touchdown();
  if (config_.lqr.enabled && tick_ % lqr_every_ == 0) refresh_correction();

  // Commanded pose for this tick; realized exactly by the ideal plant.
  body_.position.head<2>() +=
      (v_psp_ + u_v_ * Eigen::Vector2d(std::cos(body_.yaw),
                                       std::sin(body_.yaw))) *
      config_.sim.dt;
  body_.yaw = wrap_angle(body_.yaw + u_omega_ * config_.sim.dt);
  body_.position.z() =
      config_.psp.standing_height +
      plane_.height_at(body_.position.x(), body_.position.y());
  const PostureTarget posture =
      posture_target(plane_in_yaw_frame(plane_, body_.yaw));
  body_.roll = posture.roll;
  body_.pitch = posture.pitch;

  const Eigen::Vector3d commanded = body_.position;

  // Disturbances: rolling migration of the support spheres (or the
  // correction residual when the joint correction is active).
  apply_stance_kinematics();

  for (Leg leg : gait_.swing_pair()) {
    foot_world_[leg] =
        swing_position(swing_start_[leg], swing_target_[leg],
                       config_.gait.swing_height,
                       gait_.swing_progress(leg));
  }

  ++tick_;
  check_fall();

  LogRecord rec;
  rec.t = gait_.time();
  rec.com = body_.position;
  rec.yaw = body_.yaw;
  rec.roll = body_.roll;
  rec.pitch = body_.pitch;
  rec.cmd_com = commanded;
  rec.v_cmd = u_v_;
  rec.omega_cmd = u_omega_;
  rec.contact = contact_;
  rec.foot = foot_world_;
  log_.records.push_back(rec);
}

TrajectoryLog Simulator::run() {
  log_.records.reserve(static_cast<std::size_t>(total_ticks_));
  while (tick_ < total_ticks_) step();
  return std::move(log_);
}

}  // namespace quadspin
