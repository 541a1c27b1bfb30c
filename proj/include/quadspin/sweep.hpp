#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadspin/config.hpp"
#include "quadspin/metrics.hpp"

namespace quadspin {

// Controller ablations: "baseline" (no joint correction, no tracker),
// "fkm" (joint correction only), "asc" (correction + tracker). Throws
// ConfigError for any other name.
RunConfig apply_ablation(RunConfig base, const std::string& ablation);

struct SweepCell {
  std::string ablation;
  std::uint64_t seed = 0;
  double omega = 0.0;
  bool ok = false;
  std::string error;       // failure reason when !ok
  SpinMetrics metrics;     // valid when ok
  double center_dist = 0.0;  // mean radial tracking error [m], when ok
  double tracking_error = 0.0;  // mean |com - commanded com| [m], when ok
};

struct SweepAggregate {
  std::string ablation;
  double omega = 0.0;
  int cells = 0;  // successful seeds
  double radius_mean = 0.0;
  double radius_sd = 0.0;
  double center_dist_mean = 0.0;
  double center_dist_sd = 0.0;
  double tracking_error_mean = 0.0;
  double tracking_error_sd = 0.0;
};

struct OrderingEntry {
  double omega = 0.0;
  double margin_baseline_fkm = 0.0;  // relative radius drop baseline->fkm
  double margin_fkm_asc = 0.0;       // relative radius drop fkm->asc
  bool holds = false;
};

// Error-vs-rate trend for one ablation. The verdict gates on the command
// tracking error — the disturbance the rolling support feet impose per
// tick, which is the quantity that scales with the spin rate; the
// center-distance means are carried alongside for context.
struct TrendEntry {
  std::string ablation;
  std::vector<double> omegas;
  std::vector<double> center_dist_means;     // same order as omegas
  std::vector<double> tracking_error_means;  // same order as omegas
  bool nondecreasing = false;  // tracking_error_means nondecreasing
};

struct SweepReport {
  std::vector<SweepCell> cells;
  std::vector<SweepAggregate> aggregates;
  std::vector<OrderingEntry> ordering;  // one per omega with all 3 ablations
  bool ordering_holds = false;          // every entry holds (false if none)
  std::vector<TrendEntry> trends;       // one per ablation with >1 omega
};

// Runs every (ablation x seed x omega) cell — independent simulations,
// up to max_workers at a time (0 = hardware concurrency) — and
// aggregates per-cell metrics, the radius-ordering verdict with margins,
// and the error-vs-rate trend. Cell failures are captured per cell, not
// propagated.
SweepReport run_sweep(const RunConfig& base,
                      const std::vector<std::string>& ablations,
                      const std::vector<std::uint64_t>& seeds,
                      const std::vector<double>& omegas,
                      int max_workers = 0);

std::string report_to_json(const SweepReport& report);

}  // namespace quadspin
