#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "quadspin/leg_kinematics.hpp"

namespace quadspin {

// One plant tick. Column order in the CSV matches field order here:
// t, com xyz, yaw, roll, pitch, commanded com xyz, commanded speed and
// yaw rate, then per-leg (contact, foot xyz) for FR, FL, BR, BL.
struct LogRecord {
  double t = 0.0;
  Eigen::Vector3d com = Eigen::Vector3d::Zero();  // true body position
  double yaw = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  Eigen::Vector3d cmd_com = Eigen::Vector3d::Zero();
  double v_cmd = 0.0;
  double omega_cmd = 0.0;
  std::array<bool, kNumLegs> contact{};
  std::array<Eigen::Vector3d, kNumLegs> foot{};  // world foot positions
};

struct TrajectoryLog {
  std::vector<LogRecord> records;
};

// CSV with a unit-annotated header row; floats carry 17 significant
// digits so every double round-trips bit-exactly.
std::string log_to_csv(const TrajectoryLog& log);
void write_csv(const TrajectoryLog& log, const std::string& path);

// Strict inverse of log_to_csv: the header must match the fixed schema.
TrajectoryLog parse_csv(const std::string& text);
TrajectoryLog read_csv(const std::string& path);

}  // namespace quadspin
