#include "hrfe/cli.hpp"

#include "hrfe/bench_io.hpp"
#include "hrfe/report.hpp"
#include "hrfe/sample_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace hrfe {

namespace {

std::string default_out_dir() {
  const char* env = std::getenv("HRFE_OUT_DIR");
  return env && *env ? env : ".";
}

std::optional<double> parse_snr_flag(const std::string& value) {
  if (value == "noiseless") return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError("--snr expects a dB value or 'noiseless', got '" + value + "'");
  return v;
}

Component parse_component_flag(const std::string& value) {
  double f = 0.0, a = 0.0, p = 0.0;
  char trailing = 0;
  const int n = std::sscanf(value.c_str(), "%lf,%lf,%lf%c", &f, &a, &p, &trailing);
  if (n != 3)
    throw ConfigError("--component expects freq,amplitude,phase, got '" + value + "'");
  return {f, a, p};
}

std::string join_freqs(const std::vector<double>& freqs) {
  std::string out;
  for (double f : freqs) {
    if (!out.empty()) out += ", ";
    out += fmt_g17(f);
  }
  return out;
}

struct SynthArgs {
  std::string scenario;
  std::vector<std::string> components;
  int n_samples = 1600;
  double fs_hz = 1000.0;
  std::string snr = "noiseless";
  std::uint64_t seed = 0;
  double sideband_scale = -1.0;  // < 0 = stored amplitudes
  std::string out;
};

int run_synth(const SynthArgs& args) {
  SignalSpec spec;
  if (!args.scenario.empty()) {
    const FaultScenario& scenario = scenario_by_name(args.scenario);
    std::optional<double> scale;
    if (args.sideband_scale >= 0.0) scale = args.sideband_scale;
    spec = scenario_to_spec(scenario, args.n_samples, args.fs_hz,
                            parse_snr_flag(args.snr), args.seed, scale);
  } else {
    spec.n_samples = args.n_samples;
    spec.fs_hz = args.fs_hz;
    spec.snr_db = parse_snr_flag(args.snr);
    spec.seed = args.seed;
    for (const std::string& c : args.components)
      spec.components.push_back(parse_component_flag(c));
    spec.validate();
  }

  const SampleWindow window = synthesize(spec);
  write_window_csv(args.out, window);
  const double variance =
      spec.snr_db ? snr_to_noise_variance(spec.components, *spec.snr_db) : 0.0;
  std::printf("wrote %s (%d samples at %s Hz)\n", args.out.c_str(), spec.n_samples,
              fmt_g17(spec.fs_hz).c_str());
  std::printf("noise variance: %s A^2\n", fmt_g17(variance).c_str());
  return 0;
}

struct EstimateArgs {
  std::string input;
  std::string method;
  int p_real = 3;
  int m_dim = 32;
  int grid_size = 4096;
  std::string corr = "covariance";
  bool amplitudes = false;
  std::string dump_spectrum;
  double fs_override = -1.0;
};

int run_estimate(const EstimateArgs& args) {
  EstimatorConfig cfg;
  cfg.method = parse_method(args.method);
  cfg.p_real = args.p_real;
  cfg.m_dim = args.m_dim;
  cfg.grid_size = args.grid_size;
  cfg.corr = parse_correlation_method(args.corr);

  std::optional<double> fs;
  if (args.fs_override > 0.0) fs = args.fs_override;
  const SampleWindow window = read_window_csv(args.input, fs);

  if (!args.dump_spectrum.empty()) {
    const Pseudospectrum ps = pseudospectrum(window, cfg);  // grid methods only
    std::ofstream out(args.dump_spectrum);
    if (!out) throw IoError("cannot open '" + args.dump_spectrum + "' for writing");
    out << "frequency_hz,value\n";
    for (Index k = 0; k < ps.freqs_hz.size(); ++k)
      out << fmt_g17(ps.freqs_hz[k]) << "," << fmt_g17(ps.values[k]) << "\n";
    if (!out) throw IoError("short write to '" + args.dump_spectrum + "'");
    std::fprintf(stderr, "wrote %s (%lld points)\n", args.dump_spectrum.c_str(),
                 static_cast<long long>(ps.freqs_hz.size()));
  }

  EstimateSet est = estimate(window, cfg);
  if (args.amplitudes) est.amplitudes = estimate_amplitudes(window, est.frequencies_hz);

  for (const std::string& w : est.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::printf("method: %s\n", method_name(est.method).c_str());
  std::printf("frequencies_hz: %s\n", join_freqs(est.frequencies_hz).c_str());
  if (est.amplitudes)
    std::printf("amplitudes_a: %s\n", join_freqs(*est.amplitudes).c_str());
  std::printf("elapsed_s: %s\n", fmt_g17(est.elapsed_s).c_str());
  return 0;
}

struct BenchArgs {
  std::string config;
  std::string out_dir;
  int iterations = 0;  // 0 = plan value
  bool parallel = false;
  std::string axis;  // empty = snr default plan
};

int run_bench(const BenchArgs& args) {
  RunConfig cfg;
  if (!args.config.empty()) {
    if (!args.axis.empty())
      throw ConfigError("--axis conflicts with --config; set axis in the config file");
    cfg = parse_config_file(args.config);
  } else if (!args.axis.empty() && parse_axis_kind(args.axis) == AxisKind::AmplitudeScale) {
    cfg.plan = default_amplitude_plan();
  } else {
    cfg.plan = default_paper_plan();
  }
  if (args.iterations > 0) cfg.plan.iterations = args.iterations;

  SweepOptions options;
  options.parallel = args.parallel;

  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult result = run_sweep(cfg.plan, options);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string dir = args.out_dir.empty() ? default_out_dir() : args.out_dir;
  const std::string csv = dir + "/results.csv";
  const std::string meta = dir + "/results.meta.json";
  const std::string log = dir + "/estimates.csv";
  write_benchmark_csv(csv, result);
  write_benchmark_metadata(meta, result);
  write_estimate_log_csv(log, result);

  long failures = 0;
  for (const auto& cell : result.cells) failures += cell.failures;
  std::printf("ran %zu cells (%d iterations each) in %.1f s; %ld failed estimator calls\n",
              result.cells.size(), cfg.plan.iterations, wall, failures);
  std::printf("wrote %s\nwrote %s\nwrote %s\n", csv.c_str(), meta.c_str(), log.c_str());
  return 0;
}

struct ReportArgs {
  std::string input;
  std::string out_dir;
  std::string format = "markdown";
  double snr_threshold = 50.0;
};

int run_report(const ReportArgs& args) {
  const BenchmarkTable table = read_benchmark_csv(args.input);
  const Ranking ranking = build_ranking(table, args.snr_threshold);
  const std::string dir = args.out_dir.empty() ? default_out_dir() : args.out_dir;

  std::vector<std::string> written;
  if (args.format == "markdown") {
    const std::string path = dir + "/report.md";
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << render_report_markdown(table, ranking);
    if (!out) throw IoError("short write to '" + path + "'");
    written.push_back(path);
  } else {
    const std::string path = dir + "/ranking.csv";
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << render_ranking_csv(ranking);
    if (!out) throw IoError("short write to '" + path + "'");
    written.push_back(path);
  }
  for (const std::string& p : write_plot_data(dir, table)) written.push_back(p);

  if (!ranking.entries.empty())
    std::printf("top method: %s (%s accuracy, %s time)\n",
                method_name(ranking.entries.front().method).c_str(),
                accuracy_class_name(ranking.entries.front().accuracy_class).c_str(),
                time_class_name(ranking.entries.front().time_class).c_str());
  for (const std::string& p : written) std::printf("wrote %s\n", p.c_str());
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"high-resolution frequency estimation for machine fault signatures"};
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "synthesize a fault-signature current window");
  auto* scenario_opt =
      synth_cmd->add_option("--scenario", synth.scenario,
                            "canonical scenario: broken-rotor, inner-bearing, "
                            "misalignment, eccentricity");
  auto* component_opt = synth_cmd->add_option(
      "--component", synth.components, "explicit component freq,amplitude,phase");
  scenario_opt->excludes(component_opt);
  synth_cmd->add_option("--samples", synth.n_samples, "window length")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--fs", synth.fs_hz, "sample rate in Hz")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--snr", synth.snr, "SNR in dB, or 'noiseless'");
  synth_cmd->add_option("--seed", synth.seed, "noise stream seed");
  synth_cmd->add_option("--sideband-scale", synth.sideband_scale,
                        "sideband amplitude as a fraction of the fundamental");
  synth_cmd->add_option("--out", synth.out, "output CSV path")->required();

  EstimateArgs est;
  CLI::App* est_cmd = app.add_subcommand("estimate", "estimate frequencies in a window");
  est_cmd->add_option("--input", est.input, "window CSV path")->required();
  est_cmd->add_option("--method", est.method,
                      "prony, pisarenko, root-music, fft-music, ev, esprit-tls, min-norm")
      ->required();
  est_cmd->add_option("--order,-p", est.p_real, "sinusoid count P");
  est_cmd->add_option("--subspace-dim", est.m_dim, "correlation matrix dimension");
  est_cmd->add_option("--grid", est.grid_size, "pseudospectrum FFT length");
  est_cmd->add_option("--corr", est.corr, "biased-toeplitz or covariance");
  est_cmd->add_flag("--amplitudes", est.amplitudes, "also fit component amplitudes");
  est_cmd->add_option("--dump-spectrum", est.dump_spectrum,
                      "write the grid pseudospectrum CSV (grid methods)");
  est_cmd->add_option("--fs", est.fs_override, "sample rate override in Hz");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "run a Monte-Carlo benchmark sweep");
  bench_cmd->add_option("--config", bench.config, "run configuration file");
  bench_cmd->add_option("--out-dir", bench.out_dir,
                        "output directory (default $HRFE_OUT_DIR or .)");
  bench_cmd->add_option("--iterations", bench.iterations, "iterations per cell override")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--parallel", bench.parallel,
                      "spread (scenario, axis) groups over hardware threads; "
                      "timing columns are then not comparable");
  bench_cmd->add_option("--axis", bench.axis, "snr or amplitude (without --config)");

  ReportArgs report;
  CLI::App* report_cmd =
      app.add_subcommand("report", "render ranking and plot data from a results CSV");
  report_cmd->add_option("--in", report.input, "results CSV path")->required();
  report_cmd->add_option("--out-dir", report.out_dir,
                         "output directory (default $HRFE_OUT_DIR or .)");
  report_cmd->add_option("--format", report.format, "markdown or csv")
      ->check(CLI::IsMember({"markdown", "csv"}));
  report_cmd->add_option("--rank-snr-threshold", report.snr_threshold,
                         "axis cutoff for the accuracy ranking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (synth_cmd->parsed()) {
      if (synth.scenario.empty() && synth.components.empty())
        throw ConfigError("synth needs --scenario or at least one --component");
      return run_synth(synth);
    }
    if (est_cmd->parsed()) return run_estimate(est);
    if (bench_cmd->parsed()) return run_bench(bench);
    if (report_cmd->parsed()) return run_report(report);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace hrfe
