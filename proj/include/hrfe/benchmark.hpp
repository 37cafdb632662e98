#pragma once

#include "hrfe/estimators.hpp"
#include "hrfe/fault_signatures.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hrfe {

enum class AxisKind { Snr, AmplitudeScale };

std::string axis_kind_name(AxisKind k);
AxisKind parse_axis_kind(const std::string& name);

// One Monte-Carlo sweep: scenarios x methods x axis points, `iterations`
// paired windows per point.  Every method sees the identical window at a
// given (scenario, axis point, iteration); seeds never depend on the method.
struct SweepPlan {
  std::vector<FaultScenario> scenarios;
  std::vector<EstimatorConfig> methods;
  AxisKind axis = AxisKind::Snr;
  std::vector<double> axis_values;
  double fixed_snr_db = 30.0;                    // used on the amplitude axis
  std::optional<double> fixed_sideband_scale;    // used on the SNR axis; empty = stored amplitudes
  int iterations = 200;
  int n_samples = 1600;
  double fs_hz = 1000.0;
  std::uint64_t base_seed = 1;

  void validate() const;
};

// Window seed for (scenario index, axis index, iteration): splitmix64
// folding of the coordinates into base_seed.
std::uint64_t mix_seed(std::uint64_t base_seed, std::size_t scenario_idx,
                       std::size_t axis_idx, std::size_t iteration);

// Greedy globally-closest matching of estimates to truth frequencies.
// Result is indexed by truth position; entries farther than the threshold
// from every remaining estimate stay empty ("missed").
std::vector<std::optional<double>> match_to_truth(
    const std::vector<double>& estimates_hz, const std::vector<double>& truth_hz,
    double miss_threshold_hz);

struct TargetStat {
  double target_hz = 0.0;
  double mse_hz2 = 0.0;                    // misses enter as penalty^2
  std::optional<double> variance_hz2;      // matched estimates only; empty when none
  int misses = 0;
};

struct MseVariance {
  std::vector<TargetStat> targets;
  double pooled_mse_hz2 = 0.0;             // mean of the per-target MSEs
  std::optional<double> pooled_variance_hz2;
};

// Eq-style accounting: per-target MSE over all iterations with a fixed miss
// penalty, population variance (denominator = matched count) over matches.
MseVariance mse_and_variance(
    const std::vector<std::vector<std::optional<double>>>& matched_per_iteration,
    const std::vector<double>& truth_hz, double miss_penalty_hz);

struct CellResult {
  std::string scenario;
  Method method = Method::EspritTls;
  AxisKind axis = AxisKind::Snr;
  double axis_value = 0.0;
  std::vector<TargetStat> targets;
  double pooled_mse_hz2 = 0.0;
  std::optional<double> pooled_variance_hz2;
  double mean_time_s = 0.0;    // NaN when every iteration failed
  double median_time_s = 0.0;
  int failures = 0;
  int iterations = 0;
};

struct EstimateLogRow {
  std::string scenario;
  Method method = Method::EspritTls;
  AxisKind axis = AxisKind::Snr;
  double axis_value = 0.0;
  int iteration = 0;
  std::uint64_t seed = 0;
  double target_hz = 0.0;
  std::optional<double> estimate_hz;  // empty = missed
  bool failed = false;                // the whole estimator call threw
};

struct SweepResult {
  SweepPlan plan;
  std::vector<CellResult> cells;       // ordered (scenario, method, axis index)
  std::vector<EstimateLogRow> log;     // ordered (scenario, axis index, iteration, method, target)
  double miss_threshold_hz = 0.0;      // fs/4; also the penalty magnitude
  std::string environment;
  bool parallel = false;
};

struct SweepOptions {
  bool parallel = false;
  bool keep_log = true;
};

SweepResult run_sweep(const SweepPlan& plan, const SweepOptions& options = {});

// Full benchmark grid: 4 canonical scenarios x 7 methods, SNR 0..100 dB in
// steps of 5, 200 iterations, n = 1600 at 1 kHz.
SweepPlan default_paper_plan();

// Severity companion: sideband scale 0..0.2 in steps of 0.01 at 30 dB.
SweepPlan default_amplitude_plan();

// "OS, compiler, Eigen, threads" one-liner stored in benchmark metadata.
std::string host_environment();

namespace detail {
double mean(const std::vector<double>& v);    // NaN when empty
double median(std::vector<double> v);         // NaN when empty
}  // namespace detail

}  // namespace hrfe
