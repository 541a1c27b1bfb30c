#include "quadspin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "quadspin/angles.hpp"
#include "quadspin/errors.hpp"

namespace quadspin {
namespace {

double sample_variance(const std::vector<double>& xs) {
  const auto n = xs.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(n - 1);
}

double sample_mean(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  return xs.empty() ? 0.0 : mean / static_cast<double>(xs.size());
}

CircleFit around_centroid(const std::vector<Eigen::Vector2d>& points,
                          const Eigen::Vector2d& centroid) {
  CircleFit fit;
  fit.center = centroid;
  std::vector<double> dists;
  dists.reserve(points.size());
  for (const auto& p : points) dists.push_back((p - centroid).norm());
  fit.radius = sample_mean(dists);
  fit.radial_variance = sample_variance(dists);
  return fit;
}

}  // namespace

CircleFit fit_circle(const std::vector<Eigen::Vector2d>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n < 3) {
    throw DegenerateError("fit_circle: need at least 3 points");
  }
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(n);

  // Solve |q|^2 = 2 c.q + k in least squares over centered points q.
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d q = points[i] - centroid;
    a.row(i) << 2.0 * q.x(), 2.0 * q.y(), 1.0;
    b(i) = q.squaredNorm();
  }
  const Eigen::Matrix3d gram = a.transpose() * a;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(gram);
  const double lo = eig.eigenvalues()(0), hi = eig.eigenvalues()(2);
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw DegenerateError(
        "fit_circle: points are collinear (or coincident); no unique "
        "circle");
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(b);

  CircleFit fit;
  const Eigen::Vector2d center_local(sol(0), sol(1));
  fit.center = centroid + center_local;
  fit.radius = std::sqrt(
      std::max(0.0, sol(2) + center_local.squaredNorm()));

  std::vector<double> dists;
  dists.reserve(points.size());
  for (const auto& p : points) dists.push_back((p - fit.center).norm());
  fit.radial_variance = sample_variance(dists);
  return fit;
}

SpinMetrics analyze(const TrajectoryLog& log, double trim_seconds) {
  std::vector<const LogRecord*> kept;
  kept.reserve(log.records.size());
  for (const LogRecord& r : log.records) {
    if (r.t >= trim_seconds) kept.push_back(&r);
  }
  if (kept.size() < 3) {
    throw InsufficientDataError(
        "analyze: fewer than 3 records remain after trimming " +
        std::to_string(trim_seconds) + " s");
  }

  SpinMetrics m;
  m.samples = kept.size();

  std::vector<Eigen::Vector2d> xy;
  xy.reserve(kept.size());
  std::vector<double> rolls, pitches;
  rolls.reserve(kept.size());
  pitches.reserve(kept.size());
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  double slip_sum = 0.0;
  for (const LogRecord* r : kept) {
    xy.push_back(r->com.head<2>());
    centroid += xy.back();
    rolls.push_back(r->roll);
    pitches.push_back(r->pitch);
    m.drift_x = std::max(m.drift_x, std::abs(r->com.x()));
    m.drift_y = std::max(m.drift_y, std::abs(r->com.y()));
    slip_sum += (r->com.head<2>() - r->cmd_com.head<2>()).norm();
  }
  centroid /= static_cast<double>(xy.size());
  m.tracking_error = slip_sum / static_cast<double>(kept.size());

  double spread = 0.0;
  for (const auto& p : xy) spread = std::max(spread, (p - centroid).norm());
  if (spread < 1e-12) {
    m.circle = around_centroid(xy, centroid);  // stationary track
  } else {
    try {
      m.circle = fit_circle(xy);
    } catch (const DegenerateError&) {
      m.circle = around_centroid(xy, centroid);  // e.g. straight track
    }
  }

  m.roll_mean = sample_mean(rolls);
  m.roll_variance = sample_variance(rolls);
  m.pitch_mean = sample_mean(pitches);
  m.pitch_variance = sample_variance(pitches);

  // Second-order central differences at tick resolution; yaw unwrapped
  // so spin runs do not fabricate 2*pi jumps.
  std::vector<double> yaw_unwrapped;
  yaw_unwrapped.reserve(kept.size());
  double prev = kept.front()->yaw, acc = prev;
  yaw_unwrapped.push_back(acc);
  for (std::size_t i = 1; i < kept.size(); ++i) {
    acc += wrap_angle(kept[i]->yaw - prev);
    prev = kept[i]->yaw;
    yaw_unwrapped.push_back(acc);
  }

  std::vector<double> lin_acc, ang_acc;
  lin_acc.reserve(kept.size());
  ang_acc.reserve(kept.size());
  for (std::size_t i = 1; i + 1 < kept.size(); ++i) {
    const double dt_lo = kept[i]->t - kept[i - 1]->t;
    const double dt_hi = kept[i + 1]->t - kept[i]->t;
    const double dt = 0.5 * (dt_lo + dt_hi);
    if (!(dt > 0.0)) continue;
    const Eigen::Vector3d a =
        (kept[i + 1]->com - 2.0 * kept[i]->com + kept[i - 1]->com) /
        (dt * dt);
    lin_acc.push_back(a.norm());
    ang_acc.push_back((yaw_unwrapped[i + 1] - 2.0 * yaw_unwrapped[i] +
                       yaw_unwrapped[i - 1]) /
                      (dt * dt));
  }
  m.linear_accel_variance = sample_variance(lin_acc);
  m.angular_accel_variance = sample_variance(ang_acc);
  return m;
}

double mean_distance_from(const TrajectoryLog& log,
                          const Eigen::Vector2d& center,
                          double trim_seconds) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const LogRecord& r : log.records) {
    if (r.t < trim_seconds) continue;
    sum += (r.com.head<2>() - center).norm();
    ++n;
  }
  if (n == 0) {
    throw InsufficientDataError(
        "mean_distance_from: no records remain after trimming");
  }
  return sum / static_cast<double>(n);
}

double mean_tracking_error(const TrajectoryLog& log, double trim_seconds) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const LogRecord& r : log.records) {
    if (r.t < trim_seconds) continue;
    sum += (r.com.head<2>() - r.cmd_com.head<2>()).norm();
    ++n;
  }
  if (n == 0) {
    throw InsufficientDataError(
        "mean_tracking_error: no records remain after trimming");
  }
  return sum / static_cast<double>(n);
}

std::string metrics_to_json(const SpinMetrics& m) {
  nlohmann::json j;
  j["circle"] = {{"center_x_m", m.circle.center.x()},
                 {"center_y_m", m.circle.center.y()},
                 {"radius_m", m.circle.radius},
                 {"radial_variance_m2", m.circle.radial_variance}};
  j["roll_mean_rad"] = m.roll_mean;
  j["roll_variance_rad2"] = m.roll_variance;
  j["pitch_mean_rad"] = m.pitch_mean;
  j["pitch_variance_rad2"] = m.pitch_variance;
  j["linear_accel_variance_mps2_sq"] = m.linear_accel_variance;
  j["angular_accel_variance_radps2_sq"] = m.angular_accel_variance;
  j["drift_x_m"] = m.drift_x;
  j["drift_y_m"] = m.drift_y;
  j["tracking_error_m"] = m.tracking_error;
  j["samples"] = m.samples;
  return j.dump(2) + "\n";
}

}  // namespace quadspin
