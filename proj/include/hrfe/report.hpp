#pragma once

#include "hrfe/bench_io.hpp"

#include <string>
#include <vector>

namespace hrfe {

// Benchmark run configuration: a SweepPlan parsed from an INI-style file.
//
//   # comment
//   [plan]
//   scenarios = broken-rotor, inner-bearing     # or: all
//   methods = esprit-tls, root-music            # or: all
//   axis = snr                                  # or: amplitude
//   snr_values = 0:5:100                        # list and/or start:step:stop
//   amplitude_values = 0:0.01:0.2
//   iterations = 200
//   base_seed = 1
//   n_samples = 1600
//   fs_hz = 1000
//   snr_db = 30            # fixed SNR for the amplitude axis
//   sideband_scale = 0.1   # fixed scale for the SNR axis (default: stored amplitudes)
//
//   [estimators.esprit-tls]   # only for methods enabled above
//   p = 3
//   m_dim = 32
//   grid_size = 4096
//   corr = covariance
//
// Every field defaults to the default_paper_plan() value; unknown keys and
// sections are ConfigErrors naming the line.
struct RunConfig {
  SweepPlan plan;
};

RunConfig default_run_config();
RunConfig parse_config_file(const std::string& path);

struct MethodRanking {
  Method method = Method::EspritTls;
  double mean_mse_hz2 = 0.0;   // mean pooled MSE over qualifying axis points
  double median_time_s = 0.0;  // median over all cells
  int accuracy_class = 0;      // 0 best ("very high") .. 3 ("low")
  int time_class = 0;          // 0 best ("small") .. 2 ("high")
  long failures = 0;
  int rank = 0;                // 1 = best
};

struct Ranking {
  std::vector<MethodRanking> entries;  // sorted by rank
  double snr_threshold = 50.0;
  bool threshold_applied = true;  // false when no axis point met the threshold
};

// Accuracy = quartile class of mean pooled MSE over axis points >= threshold
// (all points when none qualify); time = tertile class of median cell time;
// rank order: accuracy class, then time class, then mean MSE, then median
// time, then method name.
Ranking build_ranking(const BenchmarkTable& table, double snr_threshold);

std::string accuracy_class_name(int c);
std::string time_class_name(int c);

// Deterministic markdown: ranking, timing, and failure tables.  Identical
// input bytes produce identical output bytes.
std::string render_report_markdown(const BenchmarkTable& table, const Ranking& ranking);

std::string render_ranking_csv(const Ranking& ranking);

// Per-scenario plot data: mse_<scenario>.csv and variance_<scenario>.csv,
// one axis column plus one column per method (sorted by name).  Returns the
// written paths.
std::vector<std::string> write_plot_data(const std::string& out_dir,
                                         const BenchmarkTable& table);

}  // namespace hrfe
