#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "quadspin/trajectory_log.hpp"

namespace quadspin {

struct CircleFit {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;
  double radial_variance = 0.0;  // unbiased variance of |p - center| [m^2]
};

// Algebraic least-squares circle (Kasa): minimizes the squared algebraic
// distance sum((|p-c|^2 - rho^2)^2). Points are centroid-centered before
// solving, so the fit is translation-equivariant to rounding error.
// Throws DegenerateError for fewer than 3 points or collinear points.
CircleFit fit_circle(const std::vector<Eigen::Vector2d>& points);

// Run statistics extracted from a trajectory log after trimming the
// initial transient.
struct SpinMetrics {
  CircleFit circle;                 // fit of the CoM xy track
  double roll_mean = 0.0;           // [rad]
  double roll_variance = 0.0;       // [rad^2]
  double pitch_mean = 0.0;          // [rad]
  double pitch_variance = 0.0;      // [rad^2]
  double linear_accel_variance = 0.0;   // of |a|, [(m/s^2)^2]
  double angular_accel_variance = 0.0;  // of yaw accel, [(rad/s^2)^2]
  double drift_x = 0.0;             // max |x| after trim [m]
  double drift_y = 0.0;             // max |y| after trim [m]
  double tracking_error = 0.0;      // mean |com - commanded com| [m]
  std::size_t samples = 0;          // records analyzed (after trim)
};

// Computes SpinMetrics over records with t >= trim_seconds. Stationary
// or collinear tracks fall back to the centroid (radius = mean distance
// from it) instead of failing. Accelerations use second-order central
// differences at the log's tick spacing; yaw is unwrapped first.
// Throws InsufficientDataError when fewer than 3 records survive.
SpinMetrics analyze(const TrajectoryLog& log, double trim_seconds);

// Mean distance of the CoM xy track from `center` over records with
// t >= trim_seconds: the scalar position-error summary used by sweeps.
double mean_distance_from(const TrajectoryLog& log,
                          const Eigen::Vector2d& center,
                          double trim_seconds);

// Mean planar distance between the realized CoM and the CoM the planner
// commanded for the same tick, over records with t >= trim_seconds: the
// per-tick position slip the support feet impose on the body. Throws
// InsufficientDataError when no records survive the trim.
double mean_tracking_error(const TrajectoryLog& log, double trim_seconds);

// JSON rendering of the metrics (keys annotated with units).
std::string metrics_to_json(const SpinMetrics& metrics);

}  // namespace quadspin
