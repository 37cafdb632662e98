#pragma once

#include "hrfe/benchmark.hpp"

#include <string>
#include <vector>

namespace hrfe {

// Result CSV schema, one header plus data rows:
//   scenario,method,axis_kind,axis_value,target_hz,mse_hz2,pooled_mse_hz2,
//   variance_hz2,mean_time_s,median_time_s,failures,iterations
// Each cell emits one row per target (target_hz numeric) followed by one
// pooled row (target_hz = "pooled").  All numbers are %.17g; an undefined
// variance prints as nan.
extern const char* const kBenchmarkCsvHeader;

void write_benchmark_csv(const std::string& path, const SweepResult& result);

// JSON sidecar: full plan echo, seed-mixing description, miss threshold and
// penalty, host environment, parallel flag.
void write_benchmark_metadata(const std::string& path, const SweepResult& result);

// Per-iteration estimate log:
//   scenario,method,axis_kind,axis_value,iteration,seed,target_hz,estimate_hz,failed
// with estimate_hz = "missed" for unmatched targets.
extern const char* const kEstimateLogCsvHeader;

void write_estimate_log_csv(const std::string& path, const SweepResult& result);

struct BenchRow {
  std::string scenario;
  Method method = Method::EspritTls;
  AxisKind axis = AxisKind::Snr;
  double axis_value = 0.0;
  bool pooled = false;
  double target_hz = 0.0;  // meaningful when !pooled
  double mse_hz2 = 0.0;
  double pooled_mse_hz2 = 0.0;
  double variance_hz2 = 0.0;  // NaN = undefined
  double mean_time_s = 0.0;
  double median_time_s = 0.0;
  int failures = 0;
  int iterations = 0;
};

struct BenchmarkTable {
  std::vector<BenchRow> rows;
};

// Strict reader: the header must match the schema exactly and every row must
// parse; anything else is an IoError naming the line.
BenchmarkTable read_benchmark_csv(const std::string& path);

std::vector<EstimateLogRow> read_estimate_log_csv(const std::string& path);

}  // namespace hrfe
