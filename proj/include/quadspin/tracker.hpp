#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace quadspin {

// Choice of control-input Jacobian for the planar body model.
//  - kUnicycleConsistent: exact Jacobian of the unicycle dynamics with
//    u = (v, omega). Default.
//  - kAsPrinted: steering-style third row (tan(gamma), v_r/cos(delta))
//    with u = (v, delta); singular near gamma or delta = +-pi/2. Kept for
//    fidelity experiments.
enum class BVariant { kUnicycleConsistent, kAsPrinted };

struct LqrConfig {
  bool enabled = true;
  Eigen::Vector3d q_diag{10.0, 10.0, 1.0};
  Eigen::Vector2d r_diag{0.5, 0.5};
  double dt = 0.01;         // correction cadence and discretization step
  BVariant b_variant = BVariant::kUnicycleConsistent;
  double vr_floor = 0.05;   // min |v_r| used when linearizing [m/s]
  double v_max = 0.5;       // saturation for the speed channel [m/s]
  double u2_max = 2.0;      // saturation for the rate/steer channel
};

// One query result along a reference path.
struct PathPoint {
  int index = -1;  // sample index; -1 for spin references
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double heading = 0.0;
  double curvature_radius =
      std::numeric_limits<double>::infinity();  // inf when straight
  double speed = 0.0;
};

// Planar reference: either an ordered polyline with per-sample tangent
// heading and curvature radius, or a single spin point whose heading
// advances at a fixed rate.
class ReferencePath {
 public:
  // Polyline reference traversed at constant `speed`. Headings use the
  // two-argument arctangent of centered-difference tangents; the
  // curvature radius (1 + y'^2)^{3/2} / |y''| is evaluated in parametric
  // form so vertical tangents are handled.
  static ReferencePath from_samples(std::vector<Eigen::Vector2d> samples,
                                    double speed);

  // Spin in place about `center`: heading theta0 + omega * t, zero
  // curvature radius, zero translation speed.
  static ReferencePath spin(const Eigen::Vector2d& center, double omega,
                            double theta0);

  // Circular arc of `radius` about `center`, traversed at angular rate
  // omega starting from bearing theta0 (tangent heading leads the bearing
  // by 90 degrees for positive omega).
  static ReferencePath circle(const Eigen::Vector2d& center, double radius,
                              double omega, double theta0,
                              int samples_per_turn = 720);

  bool is_spin() const { return spin_.has_value(); }
  double spin_rate() const { return spin_ ? spin_->omega : 0.0; }

  // Euclidean-nearest reference point to `com`; `t` drives the heading of
  // spin references and is ignored for polylines.
  PathPoint goal_point(const Eigen::Vector2d& com, double t) const;

 private:
  struct SpinPoint {
    Eigen::Vector2d center;
    double omega;
    double theta0;
  };

  std::vector<PathPoint> samples_;
  std::optional<SpinPoint> spin_;
};

// Continuous-time linearization of the planar body dynamics about a
// reference (heading gamma_r, speed v_r, steering delta_r).
Eigen::Matrix3d lqr_a(double gamma_r, double v_r);
// Throws SingularLinearizationError for kAsPrinted when cos(gamma_r) or
// cos(delta_r) is within 1e-6 of zero.
Eigen::Matrix<double, 3, 2> lqr_b(double gamma_r, double v_r, double delta_r,
                                  BVariant variant);

// Forward-Euler discretization: A_d = I + A dt, B_d = B dt.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> discretize(
    const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double dt);

struct LqrSolution {
  Eigen::MatrixXd p;  // Riccati fixed point, symmetric PSD
  Eigen::MatrixXd k;  // gain: correction = k * state_error
  int iterations = 0;
  double spectral_radius = 0.0;  // of the closed loop A_d - B_d K
};

// Infinite-horizon discrete LQR via Riccati value iteration from P = Q,
// stopping when the update falls below 1e-10 (max 1e5 sweeps). Throws
// NoConvergenceError — carrying the controllability rank of (A_d, B_d) —
// when iteration stalls or the closed loop is not a contraction.
LqrSolution solve_lqr(const Eigen::MatrixXd& a_d, const Eigen::MatrixXd& b_d,
                      const Eigen::MatrixXd& q, const Eigen::MatrixXd& r);

// State error (x, y, yaw) with the yaw component wrapped to (-pi, pi].
Eigen::Vector3d tracking_error(const Eigen::Vector3d& state,
                               const Eigen::Vector3d& reference);

// Caches one gain per relinearization and maps corrections back to
// (speed, yaw-rate) regardless of the B variant in use.
class LqrTracker {
 public:
  explicit LqrTracker(const LqrConfig& config);

  // Synthesizes and caches the gain about the given reference. The
  // linearization speed is floored at config.vr_floor in magnitude.
  void relinearize(double gamma_r, double v_r, double delta_r = 0.0);

  bool has_gain() const { return solution_.has_value(); }
  const LqrSolution& solution() const { return *solution_; }

  // Correction (v_tilde, omega_tilde) = gain * wrapped state error; the
  // commanded input is reference input minus this. For the steering
  // variant the yaw-rate correction is recovered through the linearized
  // heading row.
  Eigen::Vector2d correction(const Eigen::Vector3d& state,
                             const Eigen::Vector3d& reference) const;

  const LqrConfig& config() const { return config_; }

 private:
  LqrConfig config_;
  std::optional<LqrSolution> solution_;
  double gamma_ref_ = 0.0;
  double v_ref_ = 0.0;
  double delta_ref_ = 0.0;
};

}  // namespace quadspin
