#include "quadspin/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quadspin/angles.hpp"
#include "quadspin/errors.hpp"

namespace quadspin {
namespace {

// Rank of the controllability matrix [B, AB, ..., A^{n-1}B].
int controllability_rank(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const auto n = a.rows();
  Eigen::MatrixXd ctrb(n, n * b.cols());
  Eigen::MatrixXd block = b;
  for (Eigen::Index i = 0; i < n; ++i) {
    ctrb.middleCols(i * b.cols(), b.cols()) = block;
    block = a * block;
  }
  return static_cast<int>(
      ctrb.completeOrthogonalDecomposition().rank());
}

double spectral_radius_of(const Eigen::MatrixXd& m) {
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

ReferencePath ReferencePath::from_samples(
    std::vector<Eigen::Vector2d> samples, double speed) {
  if (samples.empty()) {
    throw ConfigError("ReferencePath: need at least one sample");
  }
  ReferencePath path;
  const auto n = static_cast<int>(samples.size());
  path.samples_.resize(samples.size());
  for (int i = 0; i < n; ++i) {
    // Centered tangent in the interior, one-sided at the ends.
    const int lo = std::max(i - 1, 0), hi = std::min(i + 1, n - 1);
    const Eigen::Vector2d tangent = samples[hi] - samples[lo];

    PathPoint& pt = path.samples_[i];
    pt.index = i;
    pt.position = samples[i];
    pt.heading = (n > 1) ? std::atan2(tangent.y(), tangent.x()) : 0.0;
    pt.speed = speed;

    if (i > 0 && i < n - 1) {
      // Parametric curvature from centered differences; reduces to
      // (1 + y'^2)^{3/2} / |y''| when parametrized by x.
      const Eigen::Vector2d d1 = 0.5 * (samples[i + 1] - samples[i - 1]);
      const Eigen::Vector2d d2 =
          samples[i + 1] - 2.0 * samples[i] + samples[i - 1];
      const double cross = d1.x() * d2.y() - d1.y() * d2.x();
      const double denom = std::abs(cross);
      pt.curvature_radius =
          denom < 1e-15 ? std::numeric_limits<double>::infinity()
                        : std::pow(d1.squaredNorm(), 1.5) / denom;
    }
  }
  // Endpoints inherit curvature from their interior neighbor.
  if (n >= 3) {
    path.samples_.front().curvature_radius =
        path.samples_[1].curvature_radius;
    path.samples_.back().curvature_radius =
        path.samples_[n - 2].curvature_radius;
  }
  return path;
}

ReferencePath ReferencePath::spin(const Eigen::Vector2d& center, double omega,
                                  double theta0) {
  ReferencePath path;
  path.spin_ = SpinPoint{center, omega, theta0};
  return path;
}

ReferencePath ReferencePath::circle(const Eigen::Vector2d& center,
                                    double radius, double omega,
                                    double theta0, int samples_per_turn) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(samples_per_turn + 1);
  const double dir = omega >= 0.0 ? 1.0 : -1.0;
  for (int i = 0; i <= samples_per_turn; ++i) {
    const double a =
        theta0 + dir * 2.0 * M_PI * i / static_cast<double>(samples_per_turn);
    pts.emplace_back(center.x() + radius * std::cos(a),
                     center.y() + radius * std::sin(a));
  }
  return from_samples(std::move(pts), std::abs(omega) * radius);
}

PathPoint ReferencePath::goal_point(const Eigen::Vector2d& com,
                                    double t) const {
  if (spin_) {
    PathPoint pt;
    pt.index = -1;
    pt.position = spin_->center;
    pt.heading = wrap_angle(spin_->theta0 + spin_->omega * t);
    pt.curvature_radius = 0.0;
    pt.speed = 0.0;
    return pt;
  }
  const PathPoint* best = &samples_.front();
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const PathPoint& pt : samples_) {
    const double d2 = (pt.position - com).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = &pt;
    }
  }
  return *best;
}

Eigen::Matrix3d lqr_a(double gamma_r, double v_r) {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  a(0, 2) = -v_r * std::sin(gamma_r);
  a(1, 2) = v_r * std::cos(gamma_r);
  return a;
}

Eigen::Matrix<double, 3, 2> lqr_b(double gamma_r, double v_r, double delta_r,
                                  BVariant variant) {
  Eigen::Matrix<double, 3, 2> b = Eigen::Matrix<double, 3, 2>::Zero();
  b(0, 0) = std::cos(gamma_r);
  b(1, 0) = std::sin(gamma_r);
  if (variant == BVariant::kUnicycleConsistent) {
    b(2, 1) = 1.0;
    return b;
  }
  if (std::abs(std::cos(delta_r)) < 1e-6 ||
      std::abs(std::cos(gamma_r)) < 1e-6) {
    throw SingularLinearizationError(
        "lqr_b: steering-form input matrix is singular near gamma or delta "
        "= pi/2");
  }
  b(2, 0) = std::tan(gamma_r);
  b(2, 1) = v_r / std::cos(delta_r);
  return b;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> discretize(
    const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double dt) {
  return {Eigen::MatrixXd::Identity(a.rows(), a.cols()) + a * dt, b * dt};
}

LqrSolution solve_lqr(const Eigen::MatrixXd& a_d, const Eigen::MatrixXd& b_d,
                      const Eigen::MatrixXd& q, const Eigen::MatrixXd& r) {
  constexpr int kMaxIterations = 100000;
  constexpr double kTol = 1e-10;

  LqrSolution out;
  Eigen::MatrixXd p = q;
  bool converged = false;
  for (int k = 0; k < kMaxIterations; ++k) {
    ++out.iterations;
    const Eigen::MatrixXd btp = b_d.transpose() * p;
    const Eigen::MatrixXd gain_denom = r + btp * b_d;
    const Eigen::MatrixXd next =
        q + a_d.transpose() *
                (p - btp.transpose() * gain_denom.ldlt().solve(btp)) *
                a_d;
    const double delta = (next - p).lpNorm<Eigen::Infinity>();
    p = 0.5 * (next + next.transpose());  // keep symmetric
    if (delta < kTol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NoConvergenceError(
        "solve_lqr: Riccati iteration did not settle; system is likely "
        "uncontrollable",
        controllability_rank(a_d, b_d));
  }
  out.p = p;
  const Eigen::MatrixXd btp = b_d.transpose() * p;
  out.k = (r + btp * b_d).ldlt().solve(btp * a_d);
  out.spectral_radius = spectral_radius_of(a_d - b_d * out.k);
  if (!(out.spectral_radius < 1.0)) {
    throw NoConvergenceError(
        "solve_lqr: closed loop is not a contraction (spectral radius " +
            std::to_string(out.spectral_radius) + ")",
        controllability_rank(a_d, b_d));
  }
  return out;
}

Eigen::Vector3d tracking_error(const Eigen::Vector3d& state,
                               const Eigen::Vector3d& reference) {
  Eigen::Vector3d err = state - reference;
  err.z() = wrap_angle(err.z());
  return err;
}

LqrTracker::LqrTracker(const LqrConfig& config) : config_(config) {}

void LqrTracker::relinearize(double gamma_r, double v_r, double delta_r) {
  gamma_ref_ = gamma_r;
  delta_ref_ = delta_r;
  const double sign = v_r < 0.0 ? -1.0 : 1.0;
  v_ref_ = sign * std::max(std::abs(v_r), config_.vr_floor);

  const Eigen::Matrix3d a = lqr_a(gamma_ref_, v_ref_);
  const Eigen::Matrix<double, 3, 2> b =
      lqr_b(gamma_ref_, v_ref_, delta_ref_, config_.b_variant);
  const auto [a_d, b_d] = discretize(a, b, config_.dt);
  solution_ = solve_lqr(a_d, b_d, config_.q_diag.asDiagonal(),
                        config_.r_diag.asDiagonal());
}

Eigen::Vector2d LqrTracker::correction(
    const Eigen::Vector3d& state, const Eigen::Vector3d& reference) const {
  if (!solution_) {
    throw NoConvergenceError("LqrTracker: correction requested before any "
                             "gain was synthesized");
  }
  const Eigen::Vector2d u = solution_->k * tracking_error(state, reference);
  if (config_.b_variant == BVariant::kUnicycleConsistent) {
    return u;  // channels already (v, omega)
  }
  // Steering variant: map (v, delta) through the linearized heading row to
  // recover the yaw-rate correction.
  const double omega = std::tan(gamma_ref_) * u(0) +
                       v_ref_ / std::cos(delta_ref_) * u(1);
  return {u(0), omega};
}

}  // namespace quadspin
