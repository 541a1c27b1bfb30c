#include "quadspin/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "quadspin/errors.hpp"

namespace quadspin {
namespace {

using nlohmann::json;

// Rejects keys outside the allowlist so typos fail loudly instead of
// silently running defaults.
void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* name : allowed) {
      if (key == name) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError("config: unknown key \"" + where + key + "\"");
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: bad value for \"" + std::string(key) +
                      "\": " + e.what());
  }
}

void require_positive(double v, const char* key) {
  if (!(v > 0.0)) {
    throw ConfigError("config: \"" + std::string(key) +
                      "\" must be positive");
  }
}

void require_nonnegative(double v, const char* key) {
  if (!(v >= 0.0)) {
    throw ConfigError("config: \"" + std::string(key) +
                      "\" must be nonnegative");
  }
}

void parse_geometry(const json& obj, LegGeometry& geom) {
  check_keys(obj, "geometry.",
             {"l_thigh", "l_calf", "foot_radius", "body_length",
              "body_width"});
  read(obj, "l_thigh", geom.l_thigh);
  read(obj, "l_calf", geom.l_calf);
  read(obj, "foot_radius", geom.foot_radius);
  read(obj, "body_length", geom.body_length);
  read(obj, "body_width", geom.body_width);
  require_positive(geom.l_thigh, "geometry.l_thigh");
  require_positive(geom.l_calf, "geometry.l_calf");
  require_nonnegative(geom.foot_radius, "geometry.foot_radius");
  if (geom.foot_radius >= geom.l_calf) {
    throw ConfigError("config: foot_radius must be smaller than l_calf");
  }
  require_positive(geom.body_length, "geometry.body_length");
  require_positive(geom.body_width, "geometry.body_width");
}

void parse_gait(const json& obj, GaitConfig& gait) {
  check_keys(obj, "gait.", {"cycle_period", "duty", "swing_height"});
  read(obj, "cycle_period", gait.cycle_period);
  read(obj, "duty", gait.duty);
  read(obj, "swing_height", gait.swing_height);
  require_positive(gait.cycle_period, "gait.cycle_period");
  if (!(gait.duty > 0.0 && gait.duty < 1.0)) {
    throw ConfigError("config: gait.duty must lie in (0,1)");
  }
  require_nonnegative(gait.swing_height, "gait.swing_height");
}

void parse_terrain(const json& obj, TerrainModel& terrain) {
  check_keys(obj, "terrain.",
             {"kind", "slope_pitch_deg", "stair_rise", "stair_run"});
  if (obj.contains("kind")) {
    const auto kind = obj.at("kind").get<std::string>();
    if (kind == "flat") {
      terrain.kind = TerrainModel::Kind::kFlat;
    } else if (kind == "slope") {
      terrain.kind = TerrainModel::Kind::kSlope;
    } else if (kind == "stairs") {
      terrain.kind = TerrainModel::Kind::kStairs;
    } else {
      throw ConfigError("config: terrain.kind must be flat|slope|stairs");
    }
  }
  double slope_deg = terrain.slope_pitch * 180.0 / M_PI;
  read(obj, "slope_pitch_deg", slope_deg);
  terrain.slope_pitch = slope_deg * M_PI / 180.0;
  read(obj, "stair_rise", terrain.stair_rise);
  read(obj, "stair_run", terrain.stair_run);
  require_positive(terrain.stair_run, "terrain.stair_run");
}

void parse_psp(const json& obj, ComPlannerConfig& psp) {
  check_keys(obj, "psp.", {"distribution", "sigma", "standing_height"});
  if (obj.contains("distribution")) {
    const auto name = obj.at("distribution").get<std::string>();
    if (name == "gaussian") {
      psp.distribution = WeightDistribution::kGaussian;
    } else if (name == "poisson") {
      psp.distribution = WeightDistribution::kPoisson;
    } else if (name == "geometric") {
      psp.distribution = WeightDistribution::kGeometric;
    } else {
      throw ConfigError(
          "config: psp.distribution must be gaussian|poisson|geometric");
    }
  }
  read(obj, "sigma", psp.sigma);
  read(obj, "standing_height", psp.standing_height);
  require_positive(psp.sigma, "psp.sigma");
  require_positive(psp.standing_height, "psp.standing_height");
}

void parse_lqr(const json& obj, LqrConfig& lqr) {
  check_keys(obj, "lqr.",
             {"enabled", "q_diag", "r_diag", "dt", "b_variant", "vr_floor",
              "v_max", "u2_max"});
  read(obj, "enabled", lqr.enabled);
  if (obj.contains("q_diag")) {
    const auto q = obj.at("q_diag").get<std::vector<double>>();
    if (q.size() != 3) {
      throw ConfigError("config: lqr.q_diag needs exactly 3 numbers");
    }
    lqr.q_diag = Eigen::Vector3d(q[0], q[1], q[2]);
  }
  if (obj.contains("r_diag")) {
    const auto r = obj.at("r_diag").get<std::vector<double>>();
    if (r.size() != 2) {
      throw ConfigError("config: lqr.r_diag needs exactly 2 numbers");
    }
    lqr.r_diag = Eigen::Vector2d(r[0], r[1]);
  }
  read(obj, "dt", lqr.dt);
  if (obj.contains("b_variant")) {
    const auto name = obj.at("b_variant").get<std::string>();
    if (name == "unicycle_consistent") {
      lqr.b_variant = BVariant::kUnicycleConsistent;
    } else if (name == "as_printed") {
      lqr.b_variant = BVariant::kAsPrinted;
    } else {
      throw ConfigError(
          "config: lqr.b_variant must be unicycle_consistent|as_printed");
    }
  }
  read(obj, "vr_floor", lqr.vr_floor);
  read(obj, "v_max", lqr.v_max);
  read(obj, "u2_max", lqr.u2_max);
  require_positive(lqr.dt, "lqr.dt");
  if (lqr.q_diag.minCoeff() < 0.0) {
    throw ConfigError("config: lqr.q_diag entries must be nonnegative");
  }
  if (lqr.r_diag.minCoeff() <= 0.0) {
    throw ConfigError("config: lqr.r_diag entries must be positive");
  }
  require_nonnegative(lqr.vr_floor, "lqr.vr_floor");
  require_positive(lqr.v_max, "lqr.v_max");
  require_positive(lqr.u2_max, "lqr.u2_max");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw ConfigError("config: top level must be a JSON object");
  }
  check_keys(root, "",
             {"schema_version", "geometry", "gait", "turn", "terrain",
              "psp", "lqr", "fkm", "sim", "metrics"});

  RunConfig cfg;
  read(root, "schema_version", cfg.schema_version);
  if (cfg.schema_version != 1) {
    throw ConfigError("config: unsupported schema_version (expected 1)");
  }

  if (root.contains("geometry")) parse_geometry(root["geometry"], cfg.geometry);
  if (root.contains("gait")) parse_gait(root["gait"], cfg.gait);
  if (root.contains("turn")) {
    const json& obj = root["turn"];
    check_keys(obj, "turn.", {"radius", "omega"});
    read(obj, "radius", cfg.turn.radius);
    read(obj, "omega", cfg.turn.omega);
    require_nonnegative(cfg.turn.radius, "turn.radius");
  }
  if (root.contains("terrain")) parse_terrain(root["terrain"], cfg.terrain);
  if (root.contains("psp")) parse_psp(root["psp"], cfg.psp);
  if (root.contains("lqr")) parse_lqr(root["lqr"], cfg.lqr);
  if (root.contains("fkm")) {
    const json& obj = root["fkm"];
    check_keys(obj, "fkm.", {"enabled"});
    read(obj, "enabled", cfg.fkm.enabled);
  }
  if (root.contains("sim")) {
    const json& obj = root["sim"];
    check_keys(obj, "sim.",
               {"dt", "duration_s", "noise_sigma", "seed",
                "fall_attitude_limit", "fall_com_distance"});
    read(obj, "dt", cfg.sim.dt);
    read(obj, "duration_s", cfg.sim.duration_s);
    read(obj, "noise_sigma", cfg.sim.noise_sigma);
    read(obj, "seed", cfg.sim.seed);
    read(obj, "fall_attitude_limit", cfg.sim.fall_attitude_limit);
    read(obj, "fall_com_distance", cfg.sim.fall_com_distance);
    require_positive(cfg.sim.dt, "sim.dt");
    require_positive(cfg.sim.duration_s, "sim.duration_s");
    require_nonnegative(cfg.sim.noise_sigma, "sim.noise_sigma");
    require_positive(cfg.sim.fall_attitude_limit, "sim.fall_attitude_limit");
    require_positive(cfg.sim.fall_com_distance, "sim.fall_com_distance");
  }
  if (root.contains("metrics")) {
    const json& obj = root["metrics"];
    check_keys(obj, "metrics.", {"trim_seconds"});
    read(obj, "trim_seconds", cfg.metrics.trim_seconds);
    require_nonnegative(cfg.metrics.trim_seconds, "metrics.trim_seconds");
  }
  if (cfg.lqr.dt + 1e-12 < cfg.sim.dt) {
    throw ConfigError("config: lqr.dt must not be smaller than sim.dt");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open \"" + path + "\"");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const RunConfig& cfg) {
  json root;
  root["schema_version"] = cfg.schema_version;
  root["geometry"] = {{"l_thigh", cfg.geometry.l_thigh},
                      {"l_calf", cfg.geometry.l_calf},
                      {"foot_radius", cfg.geometry.foot_radius},
                      {"body_length", cfg.geometry.body_length},
                      {"body_width", cfg.geometry.body_width}};
  root["gait"] = {{"cycle_period", cfg.gait.cycle_period},
                  {"duty", cfg.gait.duty},
                  {"swing_height", cfg.gait.swing_height}};
  root["turn"] = {{"radius", cfg.turn.radius}, {"omega", cfg.turn.omega}};
  const char* kind = cfg.terrain.kind == TerrainModel::Kind::kFlat ? "flat"
                     : cfg.terrain.kind == TerrainModel::Kind::kSlope
                         ? "slope"
                         : "stairs";
  root["terrain"] = {{"kind", kind},
                     {"slope_pitch_deg", cfg.terrain.slope_pitch * 180.0 / M_PI},
                     {"stair_rise", cfg.terrain.stair_rise},
                     {"stair_run", cfg.terrain.stair_run}};
  const char* dist =
      cfg.psp.distribution == WeightDistribution::kGaussian ? "gaussian"
      : cfg.psp.distribution == WeightDistribution::kPoisson ? "poisson"
                                                             : "geometric";
  root["psp"] = {{"distribution", dist},
                 {"sigma", cfg.psp.sigma},
                 {"standing_height", cfg.psp.standing_height}};
  root["lqr"] = {
      {"enabled", cfg.lqr.enabled},
      {"q_diag", {cfg.lqr.q_diag(0), cfg.lqr.q_diag(1), cfg.lqr.q_diag(2)}},
      {"r_diag", {cfg.lqr.r_diag(0), cfg.lqr.r_diag(1)}},
      {"dt", cfg.lqr.dt},
      {"b_variant", cfg.lqr.b_variant == BVariant::kUnicycleConsistent
                        ? "unicycle_consistent"
                        : "as_printed"},
      {"vr_floor", cfg.lqr.vr_floor},
      {"v_max", cfg.lqr.v_max},
      {"u2_max", cfg.lqr.u2_max}};
  root["fkm"] = {{"enabled", cfg.fkm.enabled}};
  root["sim"] = {{"dt", cfg.sim.dt},
                 {"duration_s", cfg.sim.duration_s},
                 {"noise_sigma", cfg.sim.noise_sigma},
                 {"seed", cfg.sim.seed},
                 {"fall_attitude_limit", cfg.sim.fall_attitude_limit},
                 {"fall_com_distance", cfg.sim.fall_com_distance}};
  root["metrics"] = {{"trim_seconds", cfg.metrics.trim_seconds}};
  return root.dump(2) + "\n";
}

}  // namespace quadspin
