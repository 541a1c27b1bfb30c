#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "json.hpp"
#include "quadspin/angles.hpp"
#include "quadspin/errors.hpp"
#include "quadspin/metrics.hpp"

using namespace quadspin;

namespace {

// Uniform circular motion about `center`, one record per millisecond.
TrajectoryLog circular_log(const Eigen::Vector2d& center, double radius,
                           double omega, double duration, double roll = 0.0,
                           double pitch = 0.0) {
  TrajectoryLog log;
  const double dt = 0.001;
  const int n = static_cast<int>(duration / dt);
  for (int i = 1; i <= n; ++i) {
    LogRecord r;
    r.t = i * dt;
    const double a = omega * r.t;
    r.com = {center.x() + radius * std::cos(a),
             center.y() + radius * std::sin(a), 0.29};
    r.yaw = wrap_angle(a + M_PI / 2.0);
    r.roll = roll;
    r.pitch = pitch;
    r.cmd_com = r.com;
    log.records.push_back(r);
  }
  return log;
}

}  // namespace

TEST_CASE("circle fit recovers exact circles") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    CAPTURE(trial);
    const Eigen::Vector2d center(u(rng), u(rng));
    const double radius = 0.05 + 0.5 * std::abs(u(rng));
    std::vector<Eigen::Vector2d> pts;
    for (int k = 0; k < 12; ++k) {
      const double a = u(rng) * M_PI;
      pts.emplace_back(center.x() + radius * std::cos(a),
                       center.y() + radius * std::sin(a));
    }
    const CircleFit fit = fit_circle(pts);
    CHECK((fit.center - center).norm() < 1e-9);
    CHECK(std::abs(fit.radius - radius) < 1e-9);
    CHECK(fit.radial_variance < 1e-18);
  }
}

TEST_CASE("circle fit rejects degenerate inputs") {
  CHECK_THROWS_AS(fit_circle({}), DegenerateError);
  CHECK_THROWS_AS(fit_circle({{0.0, 0.0}, {1.0, 1.0}}), DegenerateError);

  std::vector<Eigen::Vector2d> line;
  for (int i = 0; i < 10; ++i) line.emplace_back(0.1 * i, 0.2 * i);
  CHECK_THROWS_AS(fit_circle(line), DegenerateError);

  std::vector<Eigen::Vector2d> clump(8, Eigen::Vector2d(0.3, -0.4));
  CHECK_THROWS_AS(fit_circle(clump), DegenerateError);
}

TEST_CASE("circle fit tolerates noise") {
  std::mt19937 rng(99);
  std::normal_distribution<double> n(0.0, 1e-4);
  std::vector<Eigen::Vector2d> pts;
  for (int k = 0; k < 400; ++k) {
    const double a = 2.0 * M_PI * k / 400.0;
    pts.emplace_back(0.5 + 0.2 * std::cos(a) + n(rng),
                     -0.1 + 0.2 * std::sin(a) + n(rng));
  }
  const CircleFit fit = fit_circle(pts);
  CHECK((fit.center - Eigen::Vector2d(0.5, -0.1)).norm() < 1e-4);
  CHECK(std::abs(fit.radius - 0.2) < 1e-4);
  CHECK(fit.radial_variance == doctest::Approx(1e-8).epsilon(0.3));
}

TEST_CASE("analyze reads off uniform circular motion") {
  const Eigen::Vector2d center(0.02, -0.01);
  const TrajectoryLog log =
      circular_log(center, 0.015, 0.7, 10.0, 0.01, -0.02);
  const SpinMetrics m = analyze(log, 2.0);

  CHECK((m.circle.center - center).norm() < 1e-9);
  CHECK(m.circle.radius == doctest::Approx(0.015).epsilon(1e-9));
  CHECK(m.circle.radial_variance < 1e-18);
  CHECK(m.roll_mean == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(m.roll_variance < 1e-24);
  CHECK(m.pitch_mean == doctest::Approx(-0.02).epsilon(1e-12));
  CHECK(m.pitch_variance < 1e-24);
  // Uniform rotation: constant |a| and zero angular acceleration, so both
  // variances vanish (up to difference rounding).
  CHECK(m.linear_accel_variance < 1e-8);
  CHECK(m.angular_accel_variance < 1e-8);
  CHECK(m.drift_x <= 0.02 + 0.015 + 1e-12);
  CHECK(m.drift_y <= 0.01 + 0.015 + 1e-12);
  CHECK(m.samples == 8001);
}

TEST_CASE("analyze trims the transient") {
  TrajectoryLog log = circular_log({0.0, 0.0}, 0.01, 0.7, 6.0);
  // Corrupt the first two seconds; a correct trim never sees them.
  for (LogRecord& r : log.records) {
    if (r.t < 2.0) r.com.head<2>() += Eigen::Vector2d(50.0, 50.0);
  }
  const SpinMetrics m = analyze(log, 2.0);
  CHECK(m.circle.radius == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(m.drift_x < 0.02);

  CHECK_THROWS_AS(analyze(log, 5.999), InsufficientDataError);
  CHECK_THROWS_AS(analyze({}, 0.0), InsufficientDataError);
}

TEST_CASE("yaw unwrap flattens the pi boundary") {
  // 1.2 rad/s for 10 s crosses +pi; unwrapped yaw acceleration is zero.
  const TrajectoryLog log = circular_log({0.0, 0.0}, 0.02, 1.2, 10.0);
  const SpinMetrics m = analyze(log, 1.0);
  CHECK(m.angular_accel_variance < 1e-8);
}

TEST_CASE("stationary and collinear tracks fall back to the centroid") {
  TrajectoryLog still;
  for (int i = 1; i <= 1000; ++i) {
    LogRecord r;
    r.t = 0.001 * i;
    r.com = {0.3, -0.2, 0.29};
    still.records.push_back(r);
  }
  const SpinMetrics ms = analyze(still, 0.0);
  CHECK((ms.circle.center - Eigen::Vector2d(0.3, -0.2)).norm() < 1e-12);
  // Radius is the mean distance from the centroid, which only vanishes to
  // rounding error for identical points.
  CHECK(ms.circle.radius < 1e-12);

  TrajectoryLog line;
  for (int i = 1; i <= 1000; ++i) {
    LogRecord r;
    r.t = 0.001 * i;
    r.com = {0.001 * i, 0.002 * i, 0.29};
    line.records.push_back(r);
  }
  const SpinMetrics ml = analyze(line, 0.0);
  // Mean distance from the centroid of a uniform segment of length L is
  // L/4; here L = |(1, 2)| * 0.999.
  const double expected = std::hypot(1.0, 2.0) * 0.999 / 4.0;
  CHECK(ml.circle.radius == doctest::Approx(expected).epsilon(1e-2));
}

TEST_CASE("mean distance from a point") {
  const TrajectoryLog log = circular_log({0.1, 0.2}, 0.05, 0.7, 4.0);
  CHECK(mean_distance_from(log, {0.1, 0.2}, 1.0) ==
        doctest::Approx(0.05).epsilon(1e-9));
  // From the far side the mean is dominated by the offset.
  CHECK(mean_distance_from(log, {1.1, 0.2}, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-2));
  CHECK_THROWS_AS(mean_distance_from(log, {0.0, 0.0}, 10.0),
                  InsufficientDataError);
  CHECK_THROWS_AS(mean_distance_from({}, {0.0, 0.0}, 0.0),
                  InsufficientDataError);
}

TEST_CASE("mean tracking error against the commanded trajectory") {
  TrajectoryLog log;
  for (int i = 1; i <= 400; ++i) {
    LogRecord r;
    r.t = 0.01 * i;
    r.cmd_com = {0.01 * i, -0.02 * i, 0.29};
    // Realized CoM trails the command by 3 mm in x and 4 mm in y.
    r.com = r.cmd_com + Eigen::Vector3d(0.003, -0.004, 0.0);
    log.records.push_back(r);
  }
  CHECK(mean_tracking_error(log, 1.0) ==
        doctest::Approx(0.005).epsilon(1e-12));
  // The z component never enters: only the planar slip counts.
  for (LogRecord& r : log.records) r.com.z() += 0.05;
  CHECK(mean_tracking_error(log, 1.0) ==
        doctest::Approx(0.005).epsilon(1e-12));
  CHECK_THROWS_AS(mean_tracking_error(log, 10.0), InsufficientDataError);
  CHECK_THROWS_AS(mean_tracking_error({}, 0.0), InsufficientDataError);
  // analyze() reports the same number.
  CHECK(analyze(log, 1.0).tracking_error ==
        doctest::Approx(0.005).epsilon(1e-12));
}

TEST_CASE("metrics serialize with annotated keys") {
  const TrajectoryLog log = circular_log({0.0, 0.0}, 0.02, 0.7, 4.0);
  const SpinMetrics m = analyze(log, 1.0);
  const nlohmann::json j = nlohmann::json::parse(metrics_to_json(m));

  CHECK(j.contains("circle"));
  CHECK(j["circle"].contains("center_x_m"));
  CHECK(j["circle"].contains("center_y_m"));
  CHECK(j["circle"].contains("radius_m"));
  CHECK(j["circle"].contains("radial_variance_m2"));
  CHECK(j.contains("roll_mean_rad"));
  CHECK(j.contains("roll_variance_rad2"));
  CHECK(j.contains("pitch_mean_rad"));
  CHECK(j.contains("pitch_variance_rad2"));
  CHECK(j.contains("linear_accel_variance_mps2_sq"));
  CHECK(j.contains("angular_accel_variance_radps2_sq"));
  CHECK(j.contains("drift_x_m"));
  CHECK(j.contains("drift_y_m"));
  CHECK(j.contains("tracking_error_m"));
  CHECK(j.contains("samples"));
  CHECK(j["circle"]["radius_m"].get<double>() ==
        doctest::Approx(0.02).epsilon(1e-9));
  CHECK(j["samples"].get<std::size_t>() == m.samples);
}
