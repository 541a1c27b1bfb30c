#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "quadspin/leg_kinematics.hpp"
#include "quadspin/terrain.hpp"

namespace quadspin {

// Shape of the phase-dependent vertex weight bump over stance progress.
enum class WeightDistribution { kGaussian, kPoisson, kGeometric };

struct ComPlannerConfig {
  WeightDistribution distribution = WeightDistribution::kGaussian;
  double sigma = 0.16;           // gaussian bump width, in stance fractions
  double standing_height = 0.29;  // trunk height above the ground plane [m]
};

// Weight of a leg's support vertex: 0 while swinging, otherwise a unimodal
// bump over stance progress s in [0,1] that peaks at 1 at mid-stance
// (s = 0.5), where the leg carries load most reliably.
double stance_weight(bool in_stance, double stance_progress,
                     const ComPlannerConfig& config);

// The projected support polygon: each foot is pulled toward the ground
// projection of the stance-diagonal midpoint O by its phase weight.
struct SupportVertexSet {
  Eigen::Vector3d origin;  // O: midpoint of the two stance feet
  std::array<double, kNumLegs> weights;
  std::array<Eigen::Vector3d, kNumLegs> vertices;  // P_i, on the ground
};

// Builds the vertex set from current foot positions and per-leg phase
// state. Throws DegenerateSupportError unless exactly two legs are in
// stance (diagonal trot support).
SupportVertexSet support_vertices(
    const std::array<Eigen::Vector3d, kNumLegs>& feet,
    const std::array<bool, kNumLegs>& in_stance,
    const std::array<double, kNumLegs>& stance_progress,
    const ComPlannerConfig& config);

// Desired CoM: xy is the mean of the four projected vertices, z is the
// standing height above the fitted ground plane at that xy.
Eigen::Vector3d desired_com(const SupportVertexSet& vertices,
                            const TerrainPlane& plane,
                            const ComPlannerConfig& config);

// Straight-line CoM reference toward `target_position`, resampled at dt.
struct ComReference {
  Eigen::Vector3d target_position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();  // constant over leg
  std::vector<Eigen::Vector3d> positions;
  std::vector<Eigen::Vector3d> velocities;
};

// Velocity is (target - current)/horizon; floor(horizon/dt) samples each
// advance by velocity*dt. The last sample lands exactly on the target
// when dt divides the horizon.
ComReference interpolate_com(const Eigen::Vector3d& current,
                             const Eigen::Vector3d& target, double horizon,
                             double dt);

}  // namespace quadspin
