#pragma once

#include <Eigen/Dense>
#include <array>

#include "quadspin/leg_kinematics.hpp"

namespace quadspin {

struct GaitConfig {
  double cycle_period = 0.4;  // full trot cycle [s]
  double duty = 0.5;          // stance fraction of a leg's cycle
  double swing_height = 0.04;  // apex of the swing arc [m]
};

// Trot phase offsets per leg (FR, FL, BR, BL): diagonals move together.
inline constexpr std::array<double, kNumLegs> kTrotOffsets{0.0, 0.5, 0.5,
                                                           0.0};

// Clock for a diagonal trot. One "step" is a half cycle: the support
// diagonal swaps and the landing pair defines a new support polygon.
class GaitScheduler {
 public:
  explicit GaitScheduler(const GaitConfig& config);

  // Advances time by dt. Returns true when a diagonal touched down during
  // this advance, i.e. a new step began. dt must not span more than one
  // step boundary.
  bool advance(double dt);

  double time() const { return t_; }
  long step_index() const;     // completed touchdowns since start
  double step_duration() const;  // seconds per step (half cycle)

  double master_phase() const;       // in [0,1)
  double leg_phase(Leg leg) const;   // in [0,1)
  bool in_stance(Leg leg) const;     // phase < duty; boundary counts as swing
  double stance_progress(Leg leg) const;  // 0..1 across the stance window
  double swing_progress(Leg leg) const;   // 0..1 across the swing window

  // Diagonal that lands when step `index` begins. Even steps: FR+BL.
  static std::array<Leg, 2> landing_pair(long index);
  std::array<Leg, 2> stance_pair() const;
  std::array<Leg, 2> swing_pair() const;

  const GaitConfig& config() const { return config_; }

 private:
  // Phase clock with a one-nanocycle forward bias so that accumulated
  // rounding in t_ never lands a tick just short of a step boundary.
  double clock() const;

  GaitConfig config_;
  double t_ = 0.0;
};

// Body-frame translation increment for one step along an arc of radius
// `radius` swept through yaw increment `gamma`.
Eigen::Vector3d translation_step(double radius, double gamma);

// Hip offset of `leg` rotated by gamma about +z: where the hip sits in the
// pre-step body frame after the body yaws by gamma.
Eigen::Vector3d rotation_step(const LegGeometry& geom, Leg leg, double gamma);

// Commanded foothold for `leg`, in world xy at z = 0, for a step that
// advances the body along the arc (radius, gamma) starting from pose
// (body_xy, yaw). Combines the arc translation with the yaw-induced
// displacement of the hip so that a pure spin keeps feet under the hips.
Eigen::Vector3d plan_foothold(const LegGeometry& geom, Leg leg,
                              const Eigen::Vector2d& body_xy, double yaw,
                              double radius, double gamma);

// Cycloidal swing profile from `from` to `to` with apex height `height`
// above the chord, at normalized swing progress s in [0,1]. Horizontal
// motion and the vertical bump both pause at lift-off and touchdown
// (zero velocity at s = 0 and s = 1).
Eigen::Vector3d swing_position(const Eigen::Vector3d& from,
                               const Eigen::Vector3d& to, double height,
                               double s);

}  // namespace quadspin
