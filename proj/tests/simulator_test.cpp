#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <string>

#include "quadspin/errors.hpp"
#include "quadspin/simulator.hpp"

using namespace quadspin;

namespace {

RunConfig spin_config(double duration) {
  RunConfig cfg;
  cfg.turn.radius = 0.0;
  cfg.turn.omega = 0.7;
  cfg.sim.duration_s = duration;
  return cfg;
}

RunConfig quiet_baseline(double duration) {
  RunConfig cfg = spin_config(duration);
  cfg.geometry.foot_radius = 0.0;
  cfg.sim.noise_sigma = 0.0;
  cfg.lqr.enabled = false;
  cfg.fkm.enabled = false;
  return cfg;
}

}  // namespace

TEST_CASE("construction places the robot in a settled stance") {
  Simulator sim(spin_config(1.0));
  CHECK(sim.tick() == 0);
  CHECK(sim.body().position.x() == 0.0);
  CHECK(sim.body().position.y() == 0.0);
  CHECK(sim.body().position.z() == doctest::Approx(0.29).epsilon(1e-12));
  CHECK(sim.body().yaw == 0.0);

  // Diagonal trot: FR/BL load first, FL/BR start their swing.
  CHECK(sim.contacts()[kFR]);
  CHECK(sim.contacts()[kBL]);
  CHECK_FALSE(sim.contacts()[kFL]);
  CHECK_FALSE(sim.contacts()[kBR]);

  // Flat ground fits a flat plane.
  CHECK(std::abs(sim.estimated_plane().a0) < 1e-15);
  CHECK(std::abs(sim.estimated_plane().a1) < 1e-15);
  CHECK(std::abs(sim.estimated_plane().a2) < 1e-15);

  // Stance feet start under their hips.
  const LegGeometry geom;
  const Eigen::Vector3d fr_hip = geom.hip_offset(kFR);
  CHECK(sim.feet()[kFR].x() == doctest::Approx(fr_hip.x()).epsilon(1e-12));
  CHECK(sim.feet()[kFR].y() == doctest::Approx(fr_hip.y()).epsilon(1e-12));
  CHECK(sim.feet()[kFR].z() == 0.0);
}

TEST_CASE("ideal in-place spin leaves the trunk pinned to the origin") {
  // No ball-radius rolling, no touchdown noise, no feedback: the only
  // motion left is the commanded yaw rate, and the planner symmetry keeps
  // every CoM target at the spin center.
  Simulator sim(quiet_baseline(2.0));
  const TrajectoryLog log = sim.run();
  REQUIRE(log.records.size() == 2000);

  double worst = 0.0;
  for (const LogRecord& r : log.records) {
    worst = std::max(worst, r.com.head<2>().norm());
    CHECK(r.com.z() == doctest::Approx(0.29).epsilon(1e-12));
    CHECK(r.v_cmd == 0.0);
    CHECK(r.omega_cmd == 0.7);
  }
  CHECK(worst < 1e-12);

  // Yaw integrates the commanded rate.
  const LogRecord& last = log.records.back();
  CHECK(std::abs(last.yaw - 0.7 * last.t) < 1e-9);
}

TEST_CASE("contact flags follow the trot schedule") {
  Simulator sim(spin_config(1.0));
  const TrajectoryLog log = sim.run();
  REQUIRE(log.records.size() == 1000);

  for (const LogRecord& r : log.records) {
    int stance = 0;
    for (int leg = 0; leg < kNumLegs; ++leg) stance += r.contact[leg] ? 1 : 0;
    CHECK(stance == 2);
    CHECK(r.contact[kFR] == r.contact[kBL]);
    CHECK(r.contact[kFL] == r.contact[kBR]);
    CHECK(r.contact[kFR] != r.contact[kFL]);
  }
  // Steps last 200 ms at the default cadence.
  CHECK(log.records[100].contact[kFR]);
  CHECK_FALSE(log.records[300].contact[kFR]);
  CHECK(log.records[500].contact[kFR]);

  // Timestamps advance one plant tick at a time.
  CHECK(log.records[0].t == doctest::Approx(0.001).epsilon(1e-12));
  CHECK(log.records[999].t == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("point feet keep stance anchors frozen") {
  RunConfig cfg = spin_config(0.8);
  cfg.geometry.foot_radius = 0.0;
  cfg.sim.noise_sigma = 0.0;
  Simulator sim(cfg);
  const TrajectoryLog log = sim.run();

  for (std::size_t i = 1; i < log.records.size(); ++i) {
    for (int leg = 0; leg < kNumLegs; ++leg) {
      if (log.records[i - 1].contact[leg] && log.records[i].contact[leg]) {
        CHECK(log.records[i].foot[leg] == log.records[i - 1].foot[leg]);
      }
    }
  }
}

TEST_CASE("rolling feet migrate during stance and the log shows it") {
  RunConfig cfg = spin_config(0.8);
  cfg.sim.noise_sigma = 0.0;
  cfg.lqr.enabled = false;
  cfg.fkm.enabled = false;
  Simulator sim(cfg);
  const TrajectoryLog log = sim.run();

  // Pick a stretch well inside one stance phase of the front-right leg.
  REQUIRE(log.records[20].contact[kFR]);
  REQUIRE(log.records[180].contact[kFR]);
  const Eigen::Vector3d early = log.records[20].foot[kFR];
  const Eigen::Vector3d late = log.records[180].foot[kFR];
  CHECK((late - early).head<2>().norm() > 1e-4);
}

TEST_CASE("contact feet stay glued to the true terrain") {
  RunConfig cfg = spin_config(1.0);
  cfg.terrain.kind = TerrainModel::Kind::kStairs;
  Simulator sim(cfg);
  const TrajectoryLog log = sim.run();
  for (const LogRecord& r : log.records) {
    for (int leg = 0; leg < kNumLegs; ++leg) {
      if (!r.contact[leg]) continue;
      const double ground =
          cfg.terrain.height(r.foot[leg].x(), r.foot[leg].y());
      CHECK(std::abs(r.foot[leg].z() - ground) < 1e-9);
    }
  }
}

TEST_CASE("slope posture tilts the trunk into the hill") {
  RunConfig cfg = spin_config(0.2);
  cfg.terrain.kind = TerrainModel::Kind::kSlope;
  cfg.terrain.slope_pitch = 10.0 * M_PI / 180.0;
  Simulator sim(cfg);
  // The four construction anchors are exactly coplanar, so the estimate
  // matches the slope gradient.
  CHECK(sim.estimated_plane().a1 ==
        doctest::Approx(std::tan(cfg.terrain.slope_pitch)).epsilon(1e-10));
  CHECK(std::abs(sim.estimated_plane().a2) < 1e-12);

  sim.step();
  // After one tick the body has yawed slightly, so the slope gradient is
  // split between pitch and roll in the body-yaw frame.
  const double grade = std::tan(cfg.terrain.slope_pitch);
  const double yaw = sim.body().yaw;
  CHECK(sim.body().pitch ==
        doctest::Approx(-std::atan(std::cos(yaw) * grade)).epsilon(1e-9));
  CHECK(sim.body().roll ==
        doctest::Approx(std::atan(-std::sin(yaw) * grade)).epsilon(1e-9));
}

TEST_CASE("identical configs produce byte-identical logs") {
  RunConfig cfg = spin_config(2.0);
  cfg.sim.seed = 77;
  Simulator a(cfg);
  Simulator b(cfg);
  const std::string first = log_to_csv(a.run());
  CHECK(first == log_to_csv(b.run()));

  // A different noise seed must change the trajectory.
  cfg.sim.seed = 78;
  Simulator c(cfg);
  CHECK(first != log_to_csv(c.run()));
}

TEST_CASE("turning mode orbits the commanded circle") {
  RunConfig cfg;
  cfg.turn.radius = 0.3;
  cfg.turn.omega = 0.7;
  cfg.sim.duration_s = 3.0;
  Simulator sim(cfg);
  const TrajectoryLog log = sim.run();

  const Eigen::Vector2d center(0.0, 0.3);
  for (std::size_t i = 500; i < log.records.size(); ++i) {
    const double r = (log.records[i].com.head<2>() - center).norm();
    CHECK(r > 0.15);
    CHECK(r < 0.45);
  }

  // Without feedback the commanded forward speed is exactly omega * radius.
  cfg.lqr.enabled = false;
  Simulator open_loop(cfg);
  open_loop.step();
  CHECK(open_loop.log().records[0].v_cmd ==
        doctest::Approx(0.21).epsilon(1e-12));
}

TEST_CASE("attitude beyond the limit aborts the run") {
  RunConfig cfg = spin_config(1.0);
  cfg.terrain.kind = TerrainModel::Kind::kSlope;
  cfg.terrain.slope_pitch = 10.0 * M_PI / 180.0;
  cfg.sim.fall_attitude_limit = 0.01;
  Simulator sim(cfg);
  CHECK_THROWS_AS(sim.step(), FallDetectedError);
}

TEST_CASE("violent touchdown kicks end in a detected fall") {
  RunConfig cfg = spin_config(10.0);
  cfg.sim.noise_sigma = 2.0;
  Simulator sim(cfg);
  CHECK_THROWS_AS(sim.run(), FallDetectedError);
}

TEST_CASE("true and commanded positions agree when nothing is injected") {
  Simulator sim(quiet_baseline(1.0));
  const TrajectoryLog log = sim.run();
  for (const LogRecord& r : log.records) {
    CHECK(r.com == r.cmd_com);
  }
}
