#include "hrfe/bench_io.hpp"

#include <json.hpp>

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace hrfe {

const char* const kBenchmarkCsvHeader =
    "scenario,method,axis_kind,axis_value,target_hz,mse_hz2,pooled_mse_hz2,"
    "variance_hz2,mean_time_s,median_time_s,failures,iterations";

const char* const kEstimateLogCsvHeader =
    "scenario,method,axis_kind,axis_value,iteration,seed,target_hz,estimate_hz,failed";

namespace {

std::string opt_g17(const std::optional<double>& v) {
  return v ? fmt_g17(*v) : "nan";
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& token, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE)
    throw IoError(where + ": bad numeric value '" + token + "'");
  return v;
}

long parse_long(const std::string& token, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE)
    throw IoError(where + ": bad integer '" + token + "'");
  return v;
}

}  // namespace

void write_benchmark_csv(const std::string& path, const SweepResult& result) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << kBenchmarkCsvHeader << "\n";
  for (const CellResult& cell : result.cells) {
    const std::string prefix = cell.scenario + "," + method_name(cell.method) + "," +
                               axis_kind_name(cell.axis) + "," +
                               fmt_g17(cell.axis_value) + ",";
    const std::string suffix = "," + fmt_g17(cell.mean_time_s) + "," +
                               fmt_g17(cell.median_time_s) + "," +
                               std::to_string(cell.failures) + "," +
                               std::to_string(cell.iterations) + "\n";
    for (const TargetStat& t : cell.targets)
      out << prefix << fmt_g17(t.target_hz) << "," << fmt_g17(t.mse_hz2) << ","
          << fmt_g17(cell.pooled_mse_hz2) << "," << opt_g17(t.variance_hz2)
          << suffix;
    out << prefix << "pooled," << fmt_g17(cell.pooled_mse_hz2) << ","
        << fmt_g17(cell.pooled_mse_hz2) << "," << opt_g17(cell.pooled_variance_hz2)
        << suffix;
  }
  if (!out) throw IoError("short write to '" + path + "'");
}

void write_benchmark_metadata(const std::string& path, const SweepResult& result) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  nlohmann::ordered_json plan;
  nlohmann::ordered_json scenarios = nlohmann::ordered_json::array();
  for (const auto& s : result.plan.scenarios) {
    nlohmann::ordered_json sc;
    sc["name"] = s.name;
    sc["fundamental"] = {{"freq_hz", s.fundamental.freq_hz},
                         {"amplitude", s.fundamental.amplitude},
                         {"phase_rad", s.fundamental.phase_rad}};
    nlohmann::ordered_json sides = nlohmann::ordered_json::array();
    for (const auto& c : s.sidebands)
      sides.push_back({{"freq_hz", c.freq_hz},
                       {"amplitude", c.amplitude},
                       {"phase_rad", c.phase_rad}});
    sc["sidebands"] = sides;
    scenarios.push_back(sc);
  }
  plan["scenarios"] = scenarios;
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (const auto& m : result.plan.methods)
    methods.push_back({{"method", method_name(m.method)},
                       {"p_real", m.p_real},
                       {"m_dim", m.m_dim},
                       {"grid_size", m.grid_size},
                       {"corr", correlation_method_name(m.corr)}});
  plan["methods"] = methods;
  plan["axis"] = axis_kind_name(result.plan.axis);
  plan["axis_values"] = result.plan.axis_values;
  plan["fixed_snr_db"] = result.plan.fixed_snr_db;
  if (result.plan.fixed_sideband_scale)
    plan["fixed_sideband_scale"] = *result.plan.fixed_sideband_scale;
  else
    plan["fixed_sideband_scale"] = nullptr;
  plan["iterations"] = result.plan.iterations;
  plan["n_samples"] = result.plan.n_samples;
  plan["fs_hz"] = result.plan.fs_hz;
  plan["base_seed"] = result.plan.base_seed;
  j["plan"] = plan;
  j["seed_mixing"] =
      "splitmix64 fold of (base_seed, scenario index, axis index, iteration); "
      "independent of the method so all methods share each window";
  j["miss_threshold_hz"] = result.miss_threshold_hz;
  j["miss_penalty_hz"] = result.miss_threshold_hz;
  j["environment"] = result.environment;
  j["parallel"] = result.parallel;
  j["timing_comparable"] = !result.parallel;

  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("short write to '" + path + "'");
}

void write_estimate_log_csv(const std::string& path, const SweepResult& result) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << kEstimateLogCsvHeader << "\n";
  for (const EstimateLogRow& r : result.log) {
    out << r.scenario << "," << method_name(r.method) << ","
        << axis_kind_name(r.axis) << "," << fmt_g17(r.axis_value) << ","
        << r.iteration << "," << r.seed << "," << fmt_g17(r.target_hz) << ","
        << (r.estimate_hz ? fmt_g17(*r.estimate_hz) : std::string("missed")) << ","
        << (r.failed ? 1 : 0) << "\n";
  }
  if (!out) throw IoError("short write to '" + path + "'");
}

BenchmarkTable read_benchmark_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("'" + path + "' is empty");
  strip_cr(line);
  if (line != kBenchmarkCsvHeader)
    throw IoError("'" + path + "': header does not match the benchmark schema");
  BenchmarkTable table;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const auto f = split(line, ',');
    if (f.size() != 12) throw IoError(where + ": expected 12 fields, got " +
                                      std::to_string(f.size()));
    BenchRow row;
    row.scenario = f[0];
    try {
      row.method = parse_method(f[1]);
      row.axis = parse_axis_kind(f[2]);
    } catch (const ConfigError& e) {
      throw IoError(where + ": " + e.what());
    }
    row.axis_value = parse_double(f[3], where);
    if (f[4] == "pooled") {
      row.pooled = true;
    } else {
      row.target_hz = parse_double(f[4], where);
    }
    row.mse_hz2 = parse_double(f[5], where);
    row.pooled_mse_hz2 = parse_double(f[6], where);
    row.variance_hz2 = parse_double(f[7], where);
    row.mean_time_s = parse_double(f[8], where);
    row.median_time_s = parse_double(f[9], where);
    row.failures = static_cast<int>(parse_long(f[10], where));
    row.iterations = static_cast<int>(parse_long(f[11], where));
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw IoError("'" + path + "' holds no data rows");
  return table;
}

std::vector<EstimateLogRow> read_estimate_log_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("'" + path + "' is empty");
  strip_cr(line);
  if (line != kEstimateLogCsvHeader)
    throw IoError("'" + path + "': header does not match the estimate-log schema");
  std::vector<EstimateLogRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const auto f = split(line, ',');
    if (f.size() != 9) throw IoError(where + ": expected 9 fields, got " +
                                     std::to_string(f.size()));
    EstimateLogRow row;
    row.scenario = f[0];
    try {
      row.method = parse_method(f[1]);
      row.axis = parse_axis_kind(f[2]);
    } catch (const ConfigError& e) {
      throw IoError(where + ": " + e.what());
    }
    row.axis_value = parse_double(f[3], where);
    row.iteration = static_cast<int>(parse_long(f[4], where));
    errno = 0;
    char* end = nullptr;
    row.seed = std::strtoull(f[5].c_str(), &end, 10);
    if (end == f[5].c_str() || *end != '\0' || errno == ERANGE)
      throw IoError(where + ": bad seed '" + f[5] + "'");
    row.target_hz = parse_double(f[6], where);
    if (f[7] != "missed") row.estimate_hz = parse_double(f[7], where);
    const long failed = parse_long(f[8], where);
    if (failed != 0 && failed != 1)
      throw IoError(where + ": failed flag must be 0 or 1");
    row.failed = failed == 1;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hrfe
