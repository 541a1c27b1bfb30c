#pragma once

#include <cstdint>
#include <string>

#include "quadspin/com_planner.hpp"
#include "quadspin/gait.hpp"
#include "quadspin/leg_kinematics.hpp"
#include "quadspin/terrain.hpp"
#include "quadspin/tracker.hpp"

namespace quadspin {

// Everything a run needs, mirroring the JSON config schema. All lengths
// in meters, angles in radians (except terrain.slope_pitch_deg), times in
// seconds, rates in rad/s.
struct RunConfig {
  int schema_version = 1;

  LegGeometry geometry;
  GaitConfig gait;

  struct Turn {
    double radius = 0.0;  // 0 = spin in place
    double omega = 0.7;   // commanded yaw rate [rad/s]
  } turn;

  TerrainModel terrain;
  ComPlannerConfig psp;
  LqrConfig lqr;

  struct Fkm {
    bool enabled = true;  // rolling-contact IK correction on/off
  } fkm;

  struct Sim {
    double dt = 0.001;           // plant tick [s]
    double duration_s = 30.0;    // run length [s]
    double noise_sigma = 0.001;  // touchdown xy noise sigma [m]; 0 = off
    std::uint64_t seed = 1;
    double fall_attitude_limit = 0.6;  // |roll|/|pitch| abort limit [rad]
    double fall_com_distance = 0.15;   // CoM-to-support-diagonal limit [m]
  } sim;

  struct Metrics {
    double trim_seconds = 5.0;  // initial transient dropped by analyze
  } metrics;
};

// Parses a JSON config document. Missing keys keep their defaults;
// unknown keys anywhere in the tree are rejected with ConfigError, as are
// values that fail validation (non-positive periods, bad enums, ...).
RunConfig parse_config(const std::string& json_text);

// parse_config over the contents of `path`. ConfigError if unreadable.
RunConfig load_config(const std::string& path);

// Serializes the full effective configuration (every key explicit).
std::string config_to_json(const RunConfig& config);

}  // namespace quadspin
