#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <random>

#include "quadspin/ball_foot.hpp"
#include "quadspin/com_planner.hpp"
#include "quadspin/config.hpp"
#include "quadspin/gait.hpp"
#include "quadspin/terrain.hpp"
#include "quadspin/tracker.hpp"
#include "quadspin/trajectory_log.hpp"

namespace quadspin {

struct BodyPose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double yaw = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
};

// Deterministic kinematic plant closing the loop around the full
// planning stack. Commanded motion is realized exactly except for two
// injected disturbances: the rolling migration of the spherical feet
// (the error the joint-correction stage exists to cancel) and seeded
// Gaussian body kicks at touchdowns. One instance = one run; runs are
// single-threaded and bit-reproducible for a given config.
class Simulator {
 public:
  explicit Simulator(const RunConfig& config);

  // Advances one tick: gait clock, touchdown replanning (terrain fit,
  // foothold planning, CoM reference, gain refresh), tracker correction
  // at its own cadence, commanded pose integration, stance kinematics
  // with rolling-error injection, swing trajectories, fall checks, and
  // one appended log record. Throws FallDetectedError on a fall.
  void step();

  // step() for the configured duration; returns the completed log.
  TrajectoryLog run();

  long tick() const { return tick_; }
  double time() const { return gait_.time(); }
  const BodyPose& body() const { return body_; }
  const TerrainPlane& estimated_plane() const { return plane_; }
  const GaitScheduler& gait() const { return gait_; }
  const ReferencePath& path() const { return path_; }
  const std::array<Eigen::Vector3d, kNumLegs>& feet() const {
    return foot_world_;
  }
  const std::array<Eigen::Vector3d, kNumLegs>& anchors() const {
    return anchor_;
  }
  const std::array<bool, kNumLegs>& contacts() const { return contact_; }
  const TrajectoryLog& log() const { return log_; }

 private:
  void handle_touchdown();
  void refresh_correction();
  void apply_stance_kinematics();
  void check_fall() const;
  // Joint solution for `leg` holding its anchor at the current commanded
  // pose; plain or corrected IK per the ablation flag. Returns the
  // world-frame rolling offset and, for the corrected branch, the world
  // residual of the implicit solve.
  struct StanceSolution {
    Eigen::Vector2d delta_world;
    Eigen::Vector2d residual_world;
  };
  StanceSolution solve_stance_leg(int leg) const;
  Eigen::Vector2d hip_world_xy(int leg) const;
  Eigen::Vector2d gaussian_pair();

  RunConfig config_;
  GaitScheduler gait_;
  TerrainModel terrain_;
  TerrainPlane plane_;
  LqrTracker tracker_;
  ReferencePath path_;
  std::mt19937_64 rng_;

  BodyPose body_;
  std::array<Eigen::Vector3d, kNumLegs> foot_world_{};
  std::array<Eigen::Vector3d, kNumLegs> anchor_{};
  std::array<Eigen::Vector3d, kNumLegs> swing_start_{};
  std::array<Eigen::Vector3d, kNumLegs> swing_target_{};
  std::array<Eigen::Vector2d, kNumLegs> delta_prev_{};
  std::array<bool, kNumLegs> contact_{};

  Eigen::Vector2d v_psp_ = Eigen::Vector2d::Zero();  // CoM pursuit, world
  double v_ref_ = 0.0;      // reference forward speed (|omega| * radius)
  double omega_ref_ = 0.0;  // commanded yaw rate
  double u_v_ = 0.0;        // applied forward speed after correction
  double u_omega_ = 0.0;    // applied yaw rate after correction
  double gamma_step_ = 0.0;  // yaw advance per gait step
  long lqr_every_ = 1;       // ticks between tracker corrections
  long tick_ = 0;
  long total_ticks_ = 0;

  TrajectoryLog log_;
};

}  // namespace quadspin
