#include "quadspin/terrain.hpp"

#include <cmath>
#include <string>

#include "quadspin/angles.hpp"
#include "quadspin/errors.hpp"

namespace quadspin {

TerrainPlane fit_plane(const std::vector<Eigen::Vector3d>& contacts) {
  const auto n = static_cast<Eigen::Index>(contacts.size());
  if (n < 3) {
    throw DegenerateError("fit_plane: need at least 3 contact points, got " +
                          std::to_string(contacts.size()));
  }
  Eigen::MatrixXd w(n, 3);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w.row(i) << 1.0, contacts[i].x(), contacts[i].y();
    z(i) = contacts[i].z();
  }

  const Eigen::Matrix3d gram = w.transpose() * w;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(gram);
  const double lo = eig.eigenvalues()(0), hi = eig.eigenvalues()(2);
  if (!(lo > 0.0) || hi / lo > 1e8) {
    throw DegenerateError(
        "fit_plane: contact footprint is collinear or too thin to pin down "
        "a plane");
  }

  const Eigen::Vector3d a = w.colPivHouseholderQr().solve(z);
  return {a(0), a(1), a(2)};
}

Eigen::Vector3d remap_foothold(const TerrainPlane& plane,
                               const Eigen::Vector3d& foothold) {
  Eigen::Vector3d out = foothold;
  out.z() += plane.height_at(foothold.x(), foothold.y());
  return out;
}

TerrainPlane plane_in_yaw_frame(const TerrainPlane& plane, double yaw) {
  const Eigen::Vector2d g =
      rot2(yaw).transpose() * Eigen::Vector2d(plane.a1, plane.a2);
  return {plane.a0, g.x(), g.y()};
}

PostureTarget posture_target(const TerrainPlane& plane_in_body_yaw) {
  return {std::atan(plane_in_body_yaw.a2), -std::atan(plane_in_body_yaw.a1)};
}

double TerrainModel::height(double x, double y) const {
  (void)y;
  switch (kind) {
    case Kind::kFlat:
      return 0.0;
    case Kind::kSlope:
      return std::tan(slope_pitch) * x;
    case Kind::kStairs:
      return stair_rise * std::floor(x / stair_run);
  }
  return 0.0;
}

}  // namespace quadspin
