#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "quadspin/angles.hpp"
#include "quadspin/errors.hpp"
#include "quadspin/terrain.hpp"

using namespace quadspin;

TEST_CASE("plane fit recovers planted coefficients") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> coef(-0.5, 0.5);
  std::uniform_real_distribution<double> pos(-1.0, 1.0);
  std::uniform_int_distribution<int> npts(3, 10);

  for (int trial = 0; trial < 100; ++trial) {
    TerrainPlane truth{coef(rng), coef(rng), coef(rng)};
    std::vector<Eigen::Vector3d> pts;
    const int n = npts(rng);
    for (int i = 0; i < n; ++i) {
      const double x = pos(rng), y = pos(rng);
      pts.emplace_back(x, y, truth.height_at(x, y));
    }
    // Redraw the rare nearly-degenerate footprint.
    try {
      const TerrainPlane fit = fit_plane(pts);
      CHECK(std::abs(fit.a0 - truth.a0) < 1e-10);
      CHECK(std::abs(fit.a1 - truth.a1) < 1e-10);
      CHECK(std::abs(fit.a2 - truth.a2) < 1e-10);
    } catch (const DegenerateError&) {
      --trial;
    }
  }
}

TEST_CASE("plane fit rejects degenerate footprints") {
  CHECK_THROWS_AS(fit_plane({}), DegenerateError);
  CHECK_THROWS_AS(fit_plane({{0, 0, 0}, {1, 0, 0}}), DegenerateError);

  // Collinear in xy: the normal direction is unconstrained.
  std::vector<Eigen::Vector3d> line;
  for (int i = 0; i < 5; ++i) {
    line.emplace_back(0.1 * i, 0.2 * i, 0.05 * i);
  }
  CHECK_THROWS_AS(fit_plane(line), DegenerateError);

  // A cluster of nearly coincident contacts carries no slope signal.
  std::vector<Eigen::Vector3d> clump;
  for (int i = 0; i < 4; ++i) {
    clump.emplace_back(0.5 + 1e-9 * i, -0.25 + 2e-9 * i, 0.1);
  }
  CHECK_THROWS_AS(fit_plane(clump), DegenerateError);
}

TEST_CASE("least-squares plane balances inconsistent contacts") {
  // Symmetric cross with one raised center: no plane fits, the least
  // squares solution splits the bump across the intercept.
  std::vector<Eigen::Vector3d> pts = {
      {0, 0, 0.01}, {1, 0, 0.0}, {-1, 0, 0.0}, {0, 1, 0.0}, {0, -1, 0.0}};
  const TerrainPlane fit = fit_plane(pts);
  CHECK(std::abs(fit.a0 - 0.002) < 1e-12);
  CHECK(std::abs(fit.a1) < 1e-12);
  CHECK(std::abs(fit.a2) < 1e-12);
}

TEST_CASE("height and normal are mutually consistent") {
  const TerrainPlane plane{0.1, 0.3, -0.2};
  CHECK(std::abs(plane.height_at(2.0, 1.0) - (0.1 + 0.6 - 0.2)) < 1e-15);

  const Eigen::Vector3d n = plane.normal();
  CHECK(std::abs(n.norm() - 1.0) < 1e-15);
  CHECK(n.z() > 0.0);
  // Orthogonal to both in-plane tangent directions.
  CHECK(std::abs(n.dot(Eigen::Vector3d(1, 0, plane.a1))) < 1e-15);
  CHECK(std::abs(n.dot(Eigen::Vector3d(0, 1, plane.a2))) < 1e-15);

  CHECK(TerrainPlane{}.normal() == Eigen::Vector3d(0, 0, 1));
}

TEST_CASE("remap lifts footholds onto the plane") {
  const TerrainPlane plane{0.05, 0.1, -0.3};
  const Eigen::Vector3d flat(0.4, -0.2, 0.0);
  const Eigen::Vector3d lifted = remap_foothold(plane, flat);
  CHECK(lifted.head<2>() == flat.head<2>());
  CHECK(std::abs(lifted.z() - plane.height_at(0.4, -0.2)) < 1e-15);

  // A foothold that already carries clearance keeps it.
  const Eigen::Vector3d raised(0.4, -0.2, 0.02);
  CHECK(std::abs(remap_foothold(plane, raised).z() -
                 (plane.height_at(0.4, -0.2) + 0.02)) < 1e-15);
}

TEST_CASE("yaw-frame plane reproduces world heights at rotated points") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const TerrainPlane plane{0.02, 0.15, -0.08};
  for (double yaw : {0.0, 0.4, -2.0, M_PI / 2}) {
    const TerrainPlane local = plane_in_yaw_frame(plane, yaw);
    CHECK(local.a0 == plane.a0);
    for (int i = 0; i < 20; ++i) {
      const Eigen::Vector2d body_pt(u(rng), u(rng));
      const Eigen::Vector2d world_pt = rot2(yaw) * body_pt;
      CHECK(std::abs(local.height_at(body_pt.x(), body_pt.y()) -
                     plane.height_at(world_pt.x(), world_pt.y())) < 1e-12);
    }
  }
}

TEST_CASE("posture lays the trunk along the local slope") {
  // Climbing slope along +x: pitch the nose up, no roll.
  const double beta = 0.15;
  const PostureTarget climb = posture_target({0.0, std::tan(beta), 0.0});
  CHECK(std::abs(climb.pitch - -beta) < 1e-12);
  CHECK(climb.roll == 0.0);

  // Side slope along +y: pure roll.
  const PostureTarget side = posture_target({0.0, 0.0, std::tan(beta)});
  CHECK(std::abs(side.roll - beta) < 1e-12);
  CHECK(side.pitch == 0.0);

  // Facing across the slope swaps pitch into roll.
  const TerrainPlane slope{0.0, std::tan(beta), 0.0};
  const PostureTarget across =
      posture_target(plane_in_yaw_frame(slope, M_PI / 2));
  CHECK(std::abs(across.pitch) < 1e-12);
  CHECK(std::abs(across.roll - -beta) < 1e-12);
}

TEST_CASE("terrain models produce their elevation profiles") {
  TerrainModel flat;
  CHECK(flat.height(3.0, -2.0) == 0.0);

  TerrainModel slope;
  slope.kind = TerrainModel::Kind::kSlope;
  slope.slope_pitch = 0.1;
  CHECK(std::abs(slope.height(2.0, 5.0) - 2.0 * std::tan(0.1)) < 1e-15);
  CHECK(slope.height(0.0, 7.0) == 0.0);
  CHECK(slope.height(-1.0, 0.0) < 0.0);

  TerrainModel stairs;
  stairs.kind = TerrainModel::Kind::kStairs;
  stairs.stair_rise = 0.03;
  stairs.stair_run = 0.15;
  CHECK(stairs.height(0.0, 0.0) == 0.0);
  CHECK(stairs.height(0.14, 3.0) == 0.0);
  CHECK(std::abs(stairs.height(0.16, 0.0) - 0.03) < 1e-15);
  CHECK(std::abs(stairs.height(0.31, 0.0) - 0.06) < 1e-15);
  CHECK(std::abs(stairs.height(-0.01, 0.0) - -0.03) < 1e-15);
}
