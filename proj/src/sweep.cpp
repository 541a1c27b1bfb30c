#include "quadspin/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>
#include <utility>

#include "json.hpp"
#include "quadspin/errors.hpp"
#include "quadspin/simulator.hpp"

namespace quadspin {
namespace {

// Mean |distance-from-center - R| over the trimmed track: distance from
// the spin center for R = 0, radial deviation from the commanded circle
// otherwise.
double radial_tracking_error(const TrajectoryLog& log,
                             const RunConfig& cfg) {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  if (cfg.turn.radius > 0.0) {
    const double side = cfg.turn.omega >= 0.0 ? 1.0 : -1.0;
    center = side * cfg.turn.radius * Eigen::Vector2d(0.0, 1.0);
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (const LogRecord& r : log.records) {
    if (r.t < cfg.metrics.trim_seconds) continue;
    sum += std::abs((r.com.head<2>() - center).norm() - cfg.turn.radius);
    ++n;
  }
  if (n == 0) {
    throw InsufficientDataError(
        "sweep: no records remain after trimming");
  }
  return sum / static_cast<double>(n);
}

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

}  // namespace

RunConfig apply_ablation(RunConfig base, const std::string& ablation) {
  if (ablation == "baseline") {
    base.fkm.enabled = false;
    base.lqr.enabled = false;
  } else if (ablation == "fkm") {
    base.fkm.enabled = true;
    base.lqr.enabled = false;
  } else if (ablation == "asc") {
    base.fkm.enabled = true;
    base.lqr.enabled = true;
  } else {
    throw ConfigError("sweep: unknown ablation \"" + ablation +
                      "\" (want baseline|fkm|asc)");
  }
  return base;
}

SweepReport run_sweep(const RunConfig& base,
                      const std::vector<std::string>& ablations,
                      const std::vector<std::uint64_t>& seeds,
                      const std::vector<double>& omegas,
                      int max_workers) {
  SweepReport report;
  for (const std::string& ablation : ablations) {
    apply_ablation(base, ablation);  // validate names up front
    for (double omega : omegas) {
      for (std::uint64_t seed : seeds) {
        SweepCell cell;
        cell.ablation = ablation;
        cell.seed = seed;
        cell.omega = omega;
        report.cells.push_back(std::move(cell));
      }
    }
  }

  unsigned workers = max_workers > 0
                         ? static_cast<unsigned>(max_workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  const std::size_t cell_count = std::max<std::size_t>(report.cells.size(), 1);
  if (workers > cell_count) workers = static_cast<unsigned>(cell_count);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= report.cells.size()) return;
      SweepCell& cell = report.cells[i];
      try {
        RunConfig cfg = apply_ablation(base, cell.ablation);
        cfg.sim.seed = cell.seed;
        cfg.turn.omega = cell.omega;
        Simulator sim(cfg);
        const TrajectoryLog log = sim.run();
        cell.metrics = analyze(log, cfg.metrics.trim_seconds);
        cell.center_dist = radial_tracking_error(log, cfg);
        cell.tracking_error =
            mean_tracking_error(log, cfg.metrics.trim_seconds);
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  // Aggregate per (ablation, omega), in first-seen order.
  struct Group {
    std::vector<double> radii;
    std::vector<double> dists;
    std::vector<double> tracks;
  };
  std::vector<std::pair<std::string, double>> keys;
  std::map<std::pair<std::string, double>, Group> grouped;
  for (const SweepCell& cell : report.cells) {
    if (!cell.ok) continue;
    const auto key = std::make_pair(cell.ablation, cell.omega);
    if (grouped.find(key) == grouped.end()) keys.push_back(key);
    grouped[key].radii.push_back(cell.metrics.circle.radius);
    grouped[key].dists.push_back(cell.center_dist);
    grouped[key].tracks.push_back(cell.tracking_error);
  }
  for (const auto& key : keys) {
    const Group& group = grouped[key];
    SweepAggregate agg;
    agg.ablation = key.first;
    agg.omega = key.second;
    agg.cells = static_cast<int>(group.radii.size());
    std::tie(agg.radius_mean, agg.radius_sd) = mean_sd(group.radii);
    std::tie(agg.center_dist_mean, agg.center_dist_sd) =
        mean_sd(group.dists);
    std::tie(agg.tracking_error_mean, agg.tracking_error_sd) =
        mean_sd(group.tracks);
    report.aggregates.push_back(agg);
  }

  // Radius ordering baseline > fkm > asc, per omega.
  auto find_agg = [&](const std::string& ablation,
                      double omega) -> const SweepAggregate* {
    for (const SweepAggregate& a : report.aggregates) {
      if (a.ablation == ablation && a.omega == omega) return &a;
    }
    return nullptr;
  };
  for (double omega : omegas) {
    const SweepAggregate* b = find_agg("baseline", omega);
    const SweepAggregate* f = find_agg("fkm", omega);
    const SweepAggregate* a = find_agg("asc", omega);
    if (!b || !f || !a) continue;
    OrderingEntry entry;
    entry.omega = omega;
    entry.margin_baseline_fkm =
        b->radius_mean > 0.0
            ? (b->radius_mean - f->radius_mean) / b->radius_mean
            : 0.0;
    entry.margin_fkm_asc =
        f->radius_mean > 0.0
            ? (f->radius_mean - a->radius_mean) / f->radius_mean
            : 0.0;
    entry.holds =
        entry.margin_baseline_fkm > 0.0 && entry.margin_fkm_asc > 0.0;
    report.ordering.push_back(entry);
  }
  report.ordering_holds =
      !report.ordering.empty() &&
      std::all_of(report.ordering.begin(), report.ordering.end(),
                  [](const OrderingEntry& e) { return e.holds; });

  // Error-vs-rate trend per ablation (seed-averaged command tracking
  // error, the quantity that grows with the spin rate).
  if (omegas.size() > 1) {
    std::vector<double> sorted_omegas = omegas;
    std::sort(sorted_omegas.begin(), sorted_omegas.end());
    for (const std::string& ablation : ablations) {
      TrendEntry trend;
      trend.ablation = ablation;
      for (double omega : sorted_omegas) {
        if (const SweepAggregate* agg = find_agg(ablation, omega)) {
          trend.omegas.push_back(omega);
          trend.center_dist_means.push_back(agg->center_dist_mean);
          trend.tracking_error_means.push_back(agg->tracking_error_mean);
        }
      }
      if (trend.omegas.size() < 2) continue;
      trend.nondecreasing = true;
      for (std::size_t i = 0; i + 1 < trend.tracking_error_means.size();
           ++i) {
        if (trend.tracking_error_means[i + 1] <
            trend.tracking_error_means[i] - 1e-12) {
          trend.nondecreasing = false;
          break;
        }
      }
      report.trends.push_back(std::move(trend));
    }
  }
  return report;
}

std::string report_to_json(const SweepReport& report) {
  nlohmann::json j;
  j["cells"] = nlohmann::json::array();
  for (const SweepCell& cell : report.cells) {
    nlohmann::json c = {{"ablation", cell.ablation},
                        {"seed", cell.seed},
                        {"omega_radps", cell.omega},
                        {"ok", cell.ok}};
    if (cell.ok) {
      c["radius_m"] = cell.metrics.circle.radius;
      c["radial_variance_m2"] = cell.metrics.circle.radial_variance;
      c["center_dist_m"] = cell.center_dist;
      c["tracking_error_m"] = cell.tracking_error;
      c["roll_variance_rad2"] = cell.metrics.roll_variance;
      c["pitch_variance_rad2"] = cell.metrics.pitch_variance;
      c["drift_x_m"] = cell.metrics.drift_x;
      c["drift_y_m"] = cell.metrics.drift_y;
    } else {
      c["error"] = cell.error;
    }
    j["cells"].push_back(std::move(c));
  }
  j["aggregates"] = nlohmann::json::array();
  for (const SweepAggregate& a : report.aggregates) {
    j["aggregates"].push_back(
        {{"ablation", a.ablation},
         {"omega_radps", a.omega},
         {"cells", a.cells},
         {"radius_mean_m", a.radius_mean},
         {"radius_sd_m", a.radius_sd},
         {"center_dist_mean_m", a.center_dist_mean},
         {"center_dist_sd_m", a.center_dist_sd},
         {"tracking_error_mean_m", a.tracking_error_mean},
         {"tracking_error_sd_m", a.tracking_error_sd}});
  }
  j["ordering"] = nlohmann::json::array();
  for (const OrderingEntry& e : report.ordering) {
    j["ordering"].push_back(
        {{"omega_radps", e.omega},
         {"margin_baseline_fkm", e.margin_baseline_fkm},
         {"margin_fkm_asc", e.margin_fkm_asc},
         {"holds", e.holds}});
  }
  j["ordering_holds"] = report.ordering_holds;
  j["trends"] = nlohmann::json::array();
  for (const TrendEntry& t : report.trends) {
    j["trends"].push_back(
        {{"ablation", t.ablation},
         {"omegas_radps", t.omegas},
         {"center_dist_means_m", t.center_dist_means},
         {"tracking_error_means_m", t.tracking_error_means},
         {"nondecreasing", t.nondecreasing}});
  }
  return j.dump(2) + "\n";
}

}  // namespace quadspin
