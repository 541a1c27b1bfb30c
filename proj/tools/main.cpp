#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quadspin/ball_foot.hpp"
#include "quadspin/config.hpp"
#include "quadspin/errors.hpp"
#include "quadspin/metrics.hpp"
#include "quadspin/simulator.hpp"
#include "quadspin/sweep.hpp"
#include "quadspin/tracker.hpp"
#include "quadspin/trajectory_log.hpp"

namespace {

using namespace quadspin;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(sep, start);
    if (end == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

double parse_double(const std::string& token, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse ") + what + " \"" + token +
                      "\"");
  }
}

// "1..5" (inclusive range) or "1,2,7".
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& token : split(text, ',')) {
    if (token.empty()) continue;
    const std::size_t dots = token.find("..");
    if (dots != std::string::npos) {
      const auto lo = static_cast<std::uint64_t>(
          parse_double(token.substr(0, dots), "seed"));
      const auto hi = static_cast<std::uint64_t>(
          parse_double(token.substr(dots + 2), "seed"));
      if (hi < lo) throw ConfigError("seed range \"" + token + "\" is empty");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(
          static_cast<std::uint64_t>(parse_double(token, "seed")));
    }
  }
  if (seeds.empty()) throw ConfigError("no seeds given");
  return seeds;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const char* what) {
  std::vector<double> out;
  for (const std::string& token : split(text, ',')) {
    if (token.empty()) continue;
    out.push_back(parse_double(token, what));
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open \"" + path + "\" for writing");
  out << text;
  if (!out) throw ConfigError("short write to \"" + path + "\"");
}

Eigen::IOFormat matrix_format() {
  return Eigen::IOFormat(Eigen::StreamPrecision, 0, ", ", "\n", "  [", "]");
}

int run_simulate(const std::string& config_path, std::int64_t seed,
                 const std::string& out_path) {
  RunConfig cfg =
      config_path.empty() ? RunConfig{} : load_config(config_path);
  if (seed >= 0) cfg.sim.seed = static_cast<std::uint64_t>(seed);
  Simulator sim(cfg);
  const TrajectoryLog log = sim.run();
  write_csv(log, out_path);
  std::cout << "wrote " << out_path << " (" << log.records.size()
            << " records, "
            << (log.records.empty() ? 0.0 : log.records.back().t)
            << " s simulated)\n";
  return 0;
}

int run_analyze(const std::string& log_path, double trim,
                const std::string& out_path) {
  const TrajectoryLog log = read_csv(log_path);
  const SpinMetrics metrics = analyze(log, trim);
  const std::string rendered = metrics_to_json(metrics);
  if (!out_path.empty()) write_text(out_path, rendered);
  std::cout << rendered;
  return 0;
}

int run_sweep_cmd(const std::string& config_path,
                  const std::string& ablations_text,
                  const std::string& seeds_text,
                  const std::string& omegas_text, int jobs,
                  const std::string& out_path) {
  RunConfig cfg =
      config_path.empty() ? RunConfig{} : load_config(config_path);
  std::vector<std::string> ablations;
  for (const std::string& token : split(ablations_text, ',')) {
    if (!token.empty()) ablations.push_back(token);
  }
  const std::vector<std::uint64_t> seeds = parse_seed_list(seeds_text);
  std::vector<double> omegas =
      omegas_text.empty() ? std::vector<double>{cfg.turn.omega}
                          : parse_double_list(omegas_text, "omega");
  if (omegas.empty()) omegas.push_back(cfg.turn.omega);

  const SweepReport report = run_sweep(cfg, ablations, seeds, omegas, jobs);
  const std::string rendered = report_to_json(report);
  if (!out_path.empty()) write_text(out_path, rendered);
  std::cout << rendered;

  for (const SweepCell& cell : report.cells) {
    if (!cell.ok) {
      std::cerr << "cell failed: " << cell.ablation << " seed " << cell.seed
                << " omega " << cell.omega << ": " << cell.error << "\n";
    }
  }
  return 0;
}

int run_lqr_gain(const std::string& config_path) {
  const RunConfig cfg =
      config_path.empty() ? RunConfig{} : load_config(config_path);
  const double v_nominal = std::abs(cfg.turn.omega) * cfg.turn.radius;
  const double v_r = std::max(v_nominal, cfg.lqr.vr_floor);
  const double gamma_r = 0.0, delta_r = 0.0;

  const Eigen::Matrix3d a = lqr_a(gamma_r, v_r);
  const Eigen::Matrix<double, 3, 2> b =
      lqr_b(gamma_r, v_r, delta_r, cfg.lqr.b_variant);
  const auto [a_d, b_d] = discretize(a, b, cfg.lqr.dt);
  const LqrSolution sol =
      solve_lqr(a_d, b_d, cfg.lqr.q_diag.asDiagonal(),
                cfg.lqr.r_diag.asDiagonal());

  const Eigen::IOFormat fmt = matrix_format();
  std::cout << "linearized about heading " << gamma_r << " rad, speed "
            << v_r << " m/s, dt " << cfg.lqr.dt << " s\n";
  std::cout << "A (continuous):\n" << a.format(fmt) << "\n";
  std::cout << "B (continuous):\n" << b.format(fmt) << "\n";
  std::cout << "P (cost-to-go):\n" << sol.p.format(fmt) << "\n";
  std::cout << "K (gain):\n" << sol.k.format(fmt) << "\n";
  std::cout << "closed-loop spectral radius: " << sol.spectral_radius
            << " (" << sol.iterations << " iterations)\n";
  return 0;
}

int run_kin(const std::string& fk_text, const std::string& ik_text,
            bool use_fkm) {
  const LegGeometry geom;
  if (!fk_text.empty()) {
    const std::vector<double> a = parse_double_list(fk_text, "joint angle");
    if (a.size() != 3) throw ConfigError("--fk wants a1,a2,a3");
    const JointAngles alpha{a[0], a[1], a[2]};
    const Eigen::Vector3d p = forward_kinematics(geom, alpha);
    const RollingOffset roll = rolling_offset(geom, alpha);
    const Eigen::Vector3d contact = real_contact_point(geom, alpha);
    std::cout << "point-foot position: " << p.transpose() << "\n";
    std::cout << "real contact point:  " << contact.transpose() << "\n";
    std::cout << "rolling offset:      " << roll.delta.transpose()
              << " (|delta| = " << roll.delta.norm() << ", tilt = "
              << roll.phi << " rad)\n";
    return 0;
  }
  if (!ik_text.empty()) {
    const std::vector<double> t = parse_double_list(ik_text, "coordinate");
    if (t.size() != 3) throw ConfigError("--ik wants x,y,z");
    const Eigen::Vector3d target(t[0], t[1], t[2]);
    if (use_fkm) {
      const CorrectedIkResult sol =
          corrected_inverse_kinematics(geom, target);
      std::cout << "corrected joints: " << sol.alpha.vec().transpose()
                << " (residual " << sol.residual.norm() << " m, "
                << sol.iterations << " iterations)\n";
    } else {
      const JointAngles alpha = inverse_kinematics(geom, target);
      std::cout << "joints: " << alpha.vec().transpose() << "\n";
    }
    return 0;
  }
  throw ConfigError("kin: pass --fk a1,a2,a3 or --ik x,y,z");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planning, tracking, and kinematic simulation for accurate "
               "quadruped spinning"};
  app.require_subcommand(1);

  std::string config_path, out_path, log_path;
  std::string ablations_text, seeds_text = "1", omegas_text;
  std::string fk_text, ik_text;
  std::int64_t seed_override = -1;
  double trim = 5.0;
  int jobs = 0;
  bool use_fkm = false;

  CLI::App* simulate = app.add_subcommand("simulate", "run one simulation");
  simulate->add_option("--config", config_path, "JSON config file");
  simulate->add_option("--seed", seed_override, "override sim.seed");
  simulate->add_option("--out", out_path, "trajectory CSV path")
      ->default_val("trajectory.csv");

  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "metrics from a trajectory log");
  analyze_cmd->add_option("--log", log_path, "trajectory CSV")->required();
  analyze_cmd->add_option("--trim-seconds", trim,
                          "initial transient to drop");
  analyze_cmd->add_option("--out", out_path, "metrics JSON path");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "ablation x seed x rate comparison");
  sweep_cmd->add_option("--config", config_path, "JSON config file");
  sweep_cmd->add_option("--ablations", ablations_text,
                        "comma list: baseline,fkm,asc");
  sweep_cmd->add_option("--seeds", seeds_text, "e.g. 1..5 or 1,2,7");
  sweep_cmd->add_option("--omega", omegas_text,
                        "spin rate(s), comma list [rad/s]");
  sweep_cmd->add_option("--jobs", jobs, "max concurrent runs (0 = auto)");
  sweep_cmd->add_option("--out", out_path, "report JSON path");

  CLI::App* lqr_cmd =
      app.add_subcommand("lqr-gain", "print the synthesized gain");
  lqr_cmd->add_option("--config", config_path, "JSON config file");

  CLI::App* kin_cmd = app.add_subcommand("kin", "leg kinematics queries");
  kin_cmd->add_option("--fk", fk_text, "joint angles a1,a2,a3 [rad]");
  kin_cmd->add_option("--ik", ik_text, "target x,y,z [m], hip frame");
  kin_cmd->add_flag("--fkm", use_fkm, "use rolling-contact correction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      return run_simulate(config_path, seed_override, out_path);
    }
    if (analyze_cmd->parsed()) return run_analyze(log_path, trim, out_path);
    if (sweep_cmd->parsed()) {
      return run_sweep_cmd(config_path, ablations_text, seeds_text,
                           omegas_text, jobs, out_path);
    }
    if (lqr_cmd->parsed()) return run_lqr_gain(config_path);
    if (kin_cmd->parsed()) return run_kin(fk_text, ik_text, use_fkm);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const FallDetectedError& e) {
    std::cerr << "run failed: " << e.what() << " (tick " << e.tick << ")\n";
    return 3;
  } catch (const NoConvergenceError& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 3;
  } catch (const UnreachableError& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 3;
  } catch (const SingularLinearizationError& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 3;
  } catch (const InsufficientDataError& e) {
    std::cerr << "insufficient data: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
