#pragma once

#include <Eigen/Dense>
#include <vector>

namespace quadspin {

// Local ground approximation z = a0 + a1*x + a2*y in the world frame.
struct TerrainPlane {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;

  double height_at(double x, double y) const { return a0 + a1 * x + a2 * y; }

  // Unit upward normal; cross product of the x- and y-tangent vectors.
  Eigen::Vector3d normal() const {
    return Eigen::Vector3d(-a1, -a2, 1.0).normalized();
  }
};

// Least-squares plane through the given contact points. Throws
// DegenerateError when fewer than three points are given or when the
// points are (near-)collinear in xy, in which case the caller should keep
// its previous estimate.
TerrainPlane fit_plane(const std::vector<Eigen::Vector3d>& contacts);

// Lifts a foothold planned at nominal ground level onto the plane: its z
// becomes the plane height at (x, y) plus whatever offset it carried.
Eigen::Vector3d remap_foothold(const TerrainPlane& plane,
                               const Eigen::Vector3d& foothold);

// Same plane with the gradient expressed in a frame yawed by `yaw` about
// +z (the body-heading frame). The constant term is unchanged.
TerrainPlane plane_in_yaw_frame(const TerrainPlane& plane, double yaw);

// Body attitude that lays the trunk parallel to the plane, for a plane
// already expressed in the body-heading frame.
struct PostureTarget {
  double roll = 0.0;
  double pitch = 0.0;
};
PostureTarget posture_target(const TerrainPlane& plane_in_body_yaw);

// Ground truth elevation models for simulation.
struct TerrainModel {
  enum class Kind { kFlat, kSlope, kStairs };

  Kind kind = Kind::kFlat;
  double slope_pitch = 0.0;   // radians; slope rises along +x
  double stair_rise = 0.03;   // [m]
  double stair_run = 0.15;    // [m]

  double height(double x, double y) const;
};

}  // namespace quadspin
