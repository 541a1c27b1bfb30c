#include "quadspin/com_planner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quadspin/errors.hpp"

namespace quadspin {

double stance_weight(bool in_stance, double stance_progress,
                     const ComPlannerConfig& config) {
  if (!in_stance) return 0.0;
  const double s = std::clamp(stance_progress, 0.0, 1.0);
  switch (config.distribution) {
    case WeightDistribution::kGaussian: {
      const double d = s - 0.5;
      return std::exp(-d * d / (2.0 * config.sigma * config.sigma));
    }
    case WeightDistribution::kPoisson: {
      // Gamma-shaped bump (x^k e^{-kx}, x = 2s, k = 4) scaled to peak 1
      // at mid-stance; right-skewed like its discrete namesake.
      const double k = 4.0, x = 2.0 * s;
      return std::pow(x, k) * std::exp(k * (1.0 - x));
    }
    case WeightDistribution::kGeometric: {
      // Symmetric ratio decay away from mid-stance.
      return std::pow(0.5, 4.0 * std::abs(2.0 * s - 1.0));
    }
  }
  return 0.0;
}

SupportVertexSet support_vertices(
    const std::array<Eigen::Vector3d, kNumLegs>& feet,
    const std::array<bool, kNumLegs>& in_stance,
    const std::array<double, kNumLegs>& stance_progress,
    const ComPlannerConfig& config) {
  int count = 0;
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  for (int i = 0; i < kNumLegs; ++i) {
    if (in_stance[i]) {
      origin += feet[i];
      ++count;
    }
  }
  if (count != 2) {
    throw DegenerateSupportError(
        "support_vertices: diagonal support requires exactly 2 stance "
        "legs, got " +
        std::to_string(count));
  }
  origin *= 0.5;

  SupportVertexSet out;
  out.origin = origin;
  const Eigen::Vector3d origin_proj(origin.x(), origin.y(), 0.0);
  for (int i = 0; i < kNumLegs; ++i) {
    out.weights[i] = stance_weight(in_stance[i], stance_progress[i], config);
    Eigen::Vector3d r = feet[i] - origin;
    r.z() = 0.0;  // ground projection
    out.vertices[i] = origin_proj + out.weights[i] * r;
  }
  return out;
}

Eigen::Vector3d desired_com(const SupportVertexSet& vertices,
                            const TerrainPlane& plane,
                            const ComPlannerConfig& config) {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& p : vertices.vertices) mean += p;
  mean /= static_cast<double>(kNumLegs);
  mean.z() = config.standing_height + plane.height_at(mean.x(), mean.y());
  return mean;
}

ComReference interpolate_com(const Eigen::Vector3d& current,
                             const Eigen::Vector3d& target, double horizon,
                             double dt) {
  ComReference out;
  out.target_position = target;
  out.velocity = (target - current) / horizon;
  const auto samples =
      static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
  out.positions.reserve(samples);
  out.velocities.reserve(samples);
  for (std::size_t k = 1; k <= samples; ++k) {
    out.positions.push_back(current +
                            static_cast<double>(k) * dt * out.velocity);
    out.velocities.push_back(out.velocity);
  }
  return out;
}

}  // namespace quadspin
