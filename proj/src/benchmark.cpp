#include "hrfe/benchmark.hpp"

#include "hrfe/rng.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace hrfe {

namespace detail {

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

std::string axis_kind_name(AxisKind k) {
  return k == AxisKind::Snr ? "snr" : "amplitude";
}

AxisKind parse_axis_kind(const std::string& name) {
  if (name == "snr") return AxisKind::Snr;
  if (name == "amplitude") return AxisKind::AmplitudeScale;
  throw ConfigError("unknown axis '" + name + "' (valid: snr, amplitude)");
}

void SweepPlan::validate() const {
  if (scenarios.empty()) throw std::invalid_argument("plan has no scenarios");
  if (methods.empty()) throw std::invalid_argument("plan has no methods");
  if (axis_values.empty()) throw std::invalid_argument("plan has no axis values");
  if (iterations < 2) throw std::invalid_argument("plan needs iterations >= 2");
  if (n_samples < 8) throw std::invalid_argument("plan needs n_samples >= 8");
  if (!(fs_hz > 0.0)) throw std::invalid_argument("plan needs a positive sample rate");
  for (double v : axis_values) {
    if (axis == AxisKind::Snr && !(v >= 0.0 && v <= 100.0))
      throw std::invalid_argument("SNR axis values must lie in [0, 100] dB");
    if (axis == AxisKind::AmplitudeScale && !(v >= 0.0 && v <= 0.2))
      throw std::invalid_argument("amplitude axis values must lie in [0, 0.2]");
  }
  if (!(fixed_snr_db >= 0.0 && fixed_snr_db <= 100.0))
    throw std::invalid_argument("fixed_snr_db must lie in [0, 100]");
  if (fixed_sideband_scale && !(*fixed_sideband_scale >= 0.0 && *fixed_sideband_scale <= 0.2))
    throw std::invalid_argument("fixed_sideband_scale must lie in [0, 0.2]");
  for (const auto& m : methods) m.validate();
}

std::uint64_t mix_seed(std::uint64_t base_seed, std::size_t scenario_idx,
                       std::size_t axis_idx, std::size_t iteration) {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(scenario_idx));
  h = splitmix64(h ^ static_cast<std::uint64_t>(axis_idx));
  h = splitmix64(h ^ static_cast<std::uint64_t>(iteration));
  return h;
}

std::vector<std::optional<double>> match_to_truth(
    const std::vector<double>& estimates_hz, const std::vector<double>& truth_hz,
    double miss_threshold_hz) {
  struct Cand {
    double dist;
    std::size_t t, e;
  };
  std::vector<Cand> cands;
  cands.reserve(estimates_hz.size() * truth_hz.size());
  for (std::size_t t = 0; t < truth_hz.size(); ++t)
    for (std::size_t e = 0; e < estimates_hz.size(); ++e)
      cands.push_back({std::fabs(estimates_hz[e] - truth_hz[t]), t, e});
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.t != b.t) return a.t < b.t;
    return a.e < b.e;
  });
  std::vector<std::optional<double>> matched(truth_hz.size());
  std::vector<bool> truth_used(truth_hz.size(), false);
  std::vector<bool> est_used(estimates_hz.size(), false);
  for (const Cand& c : cands) {
    if (c.dist > miss_threshold_hz) break;
    if (truth_used[c.t] || est_used[c.e]) continue;
    truth_used[c.t] = true;
    est_used[c.e] = true;
    matched[c.t] = estimates_hz[c.e];
  }
  return matched;
}

MseVariance mse_and_variance(
    const std::vector<std::vector<std::optional<double>>>& matched_per_iteration,
    const std::vector<double>& truth_hz, double miss_penalty_hz) {
  if (matched_per_iteration.empty())
    throw std::invalid_argument("mse_and_variance: no iterations");
  for (const auto& row : matched_per_iteration)
    if (row.size() != truth_hz.size())
      throw std::invalid_argument("mse_and_variance: row width must match truth");

  MseVariance out;
  const auto n_iter = matched_per_iteration.size();
  double pooled = 0.0;
  std::vector<double> defined_vars;
  for (std::size_t t = 0; t < truth_hz.size(); ++t) {
    TargetStat stat;
    stat.target_hz = truth_hz[t];
    double sq = 0.0;
    double err_sum = 0.0;
    std::size_t n_match = 0;
    for (std::size_t i = 0; i < n_iter; ++i) {
      const auto& m = matched_per_iteration[i][t];
      const double err = m ? (*m - truth_hz[t]) : miss_penalty_hz;
      sq += err * err;
      if (m) {
        err_sum += err;
        ++n_match;
      } else {
        ++stat.misses;
      }
    }
    stat.mse_hz2 = sq / static_cast<double>(n_iter);
    if (n_match > 0) {
      const double mean_err = err_sum / static_cast<double>(n_match);
      double dev = 0.0;
      for (std::size_t i = 0; i < n_iter; ++i) {
        const auto& m = matched_per_iteration[i][t];
        if (!m) continue;
        const double d = (*m - truth_hz[t]) - mean_err;
        dev += d * d;
      }
      stat.variance_hz2 = dev / static_cast<double>(n_match);
      defined_vars.push_back(*stat.variance_hz2);
    }
    pooled += stat.mse_hz2;
    out.targets.push_back(stat);
  }
  out.pooled_mse_hz2 = pooled / static_cast<double>(truth_hz.size());
  if (!defined_vars.empty()) {
    double s = 0.0;
    for (double v : defined_vars) s += v;
    out.pooled_variance_hz2 = s / static_cast<double>(defined_vars.size());
  }
  return out;
}

namespace {

// All per-iteration output of one (scenario, axis point) group; computed
// independently of every other group so groups can run on worker threads.
struct GroupOutput {
  // matched[method][iteration] -> per-target matches
  std::vector<std::vector<std::vector<std::optional<double>>>> matched;
  std::vector<std::vector<double>> times;  // successful iterations only
  std::vector<int> failures;
  std::vector<EstimateLogRow> log;
  std::vector<double> truth;
};

GroupOutput run_group(const SweepPlan& plan, std::size_t s_idx, std::size_t a_idx,
                      bool keep_log) {
  const FaultScenario& scenario = plan.scenarios[s_idx];
  const double axis_value = plan.axis_values[a_idx];
  const std::optional<double> snr =
      plan.axis == AxisKind::Snr ? std::optional<double>(axis_value)
                                 : std::optional<double>(plan.fixed_snr_db);
  const std::optional<double> scale = plan.axis == AxisKind::AmplitudeScale
                                          ? std::optional<double>(axis_value)
                                          : plan.fixed_sideband_scale;
  const double threshold = plan.fs_hz / 4.0;

  GroupOutput out;
  const std::size_t n_methods = plan.methods.size();
  out.matched.resize(n_methods);
  out.times.resize(n_methods);
  out.failures.assign(n_methods, 0);

  {
    const SignalSpec probe = scenario_to_spec(scenario, plan.n_samples, plan.fs_hz,
                                              snr, 0, scale);
    for (const auto& c : probe.components) out.truth.push_back(c.freq_hz);
    std::sort(out.truth.begin(), out.truth.end());
  }

  for (int it = 0; it < plan.iterations; ++it) {
    const std::uint64_t seed = mix_seed(plan.base_seed, s_idx, a_idx,
                                        static_cast<std::size_t>(it));
    const SignalSpec spec =
        scenario_to_spec(scenario, plan.n_samples, plan.fs_hz, snr, seed, scale);
    const SampleWindow window = synthesize(spec);

    for (std::size_t m = 0; m < n_methods; ++m) {
      std::vector<std::optional<double>> matched(out.truth.size());
      bool failed = false;
      try {
        const EstimateSet est = estimate(window, plan.methods[m]);
        matched = match_to_truth(est.frequencies_hz, out.truth, threshold);
        out.times[m].push_back(est.elapsed_s);
      } catch (const EstimationError&) {
        failed = true;
      } catch (const NumericalError&) {
        failed = true;
      }
      if (failed) ++out.failures[m];
      if (keep_log) {
        for (std::size_t t = 0; t < out.truth.size(); ++t) {
          EstimateLogRow row;
          row.scenario = scenario.name;
          row.method = plan.methods[m].method;
          row.axis = plan.axis;
          row.axis_value = axis_value;
          row.iteration = it;
          row.seed = seed;
          row.target_hz = out.truth[t];
          row.estimate_hz = matched[t];
          row.failed = failed;
          out.log.push_back(std::move(row));
        }
      }
      out.matched[m].push_back(std::move(matched));
    }
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, const SweepOptions& options) {
  plan.validate();
  const std::size_t n_s = plan.scenarios.size();
  const std::size_t n_a = plan.axis_values.size();
  const std::size_t n_groups = n_s * n_a;

  std::vector<GroupOutput> groups(n_groups);
  if (options.parallel) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_workers =
        static_cast<unsigned>(std::min<std::size_t>(hw, n_groups));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t g = next.fetch_add(1);
        if (g >= n_groups) return;
        groups[g] = run_group(plan, g / n_a, g % n_a, options.keep_log);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  } else {
    for (std::size_t g = 0; g < n_groups; ++g)
      groups[g] = run_group(plan, g / n_a, g % n_a, options.keep_log);
  }

  SweepResult result;
  result.plan = plan;
  result.miss_threshold_hz = plan.fs_hz / 4.0;
  result.environment = host_environment();
  result.parallel = options.parallel;

  for (std::size_t s = 0; s < n_s; ++s)
    for (std::size_t m = 0; m < plan.methods.size(); ++m)
      for (std::size_t a = 0; a < n_a; ++a) {
        const GroupOutput& g = groups[s * n_a + a];
        CellResult cell;
        cell.scenario = plan.scenarios[s].name;
        cell.method = plan.methods[m].method;
        cell.axis = plan.axis;
        cell.axis_value = plan.axis_values[a];
        const MseVariance mv =
            mse_and_variance(g.matched[m], g.truth, result.miss_threshold_hz);
        cell.targets = mv.targets;
        cell.pooled_mse_hz2 = mv.pooled_mse_hz2;
        cell.pooled_variance_hz2 = mv.pooled_variance_hz2;
        cell.mean_time_s = detail::mean(g.times[m]);
        cell.median_time_s = detail::median(g.times[m]);
        cell.failures = g.failures[m];
        cell.iterations = plan.iterations;
        result.cells.push_back(std::move(cell));
      }

  if (options.keep_log)
    for (std::size_t s = 0; s < n_s; ++s)
      for (std::size_t a = 0; a < n_a; ++a) {
        auto& src = groups[s * n_a + a].log;
        result.log.insert(result.log.end(), std::make_move_iterator(src.begin()),
                          std::make_move_iterator(src.end()));
      }
  return result;
}

namespace {

std::vector<double> linear_grid(double start, double step, double stop) {
  std::vector<double> v;
  for (int i = 0;; ++i) {
    const double x = start + i * step;
    if (x > stop + 1e-9) break;
    v.push_back(x);
  }
  return v;
}

std::vector<EstimatorConfig> default_methods() {
  std::vector<EstimatorConfig> m;
  for (Method method : all_methods) {
    EstimatorConfig cfg;
    cfg.method = method;
    m.push_back(cfg);
  }
  return m;
}

}  // namespace

SweepPlan default_paper_plan() {
  SweepPlan plan;
  plan.scenarios = canonical_scenarios();
  plan.methods = default_methods();
  plan.axis = AxisKind::Snr;
  plan.axis_values = linear_grid(0.0, 5.0, 100.0);
  return plan;
}

SweepPlan default_amplitude_plan() {
  SweepPlan plan;
  plan.scenarios = canonical_scenarios();
  plan.methods = default_methods();
  plan.axis = AxisKind::AmplitudeScale;
  plan.axis_values = linear_grid(0.0, 0.01, 0.2);
  plan.fixed_snr_db = 30.0;
  return plan;
}

std::string host_environment() {
  utsname u{};
  std::string os = "unknown";
  if (uname(&u) == 0)
    os = std::string(u.sysname) + " " + u.release + " " + u.machine;
#if defined(__clang__)
  const std::string compiler = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  const std::string compiler = std::string("gcc ") + std::to_string(__GNUC__) + "." +
                               std::to_string(__GNUC_MINOR__) + "." +
                               std::to_string(__GNUC_PATCHLEVEL__);
#else
  const std::string compiler = "unknown compiler";
#endif
  return os + ", " + compiler + ", Eigen " + std::to_string(EIGEN_WORLD_VERSION) +
         "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION) + ", " +
         std::to_string(std::thread::hardware_concurrency()) + " hw threads";
}

}  // namespace hrfe
