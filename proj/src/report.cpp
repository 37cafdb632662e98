#include "hrfe/report.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace hrfe {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
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

struct ConfigEntry {
  std::size_t lineno;
  std::string section;
  std::string key;
  std::string value;
};

double parse_double_or_throw(const std::string& token, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError(where + ": expected a number, got '" + token + "'");
  return v;
}

long parse_int_or_throw(const std::string& token, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE)
    throw ConfigError(where + ": expected an integer, got '" + token + "'");
  return v;
}

std::uint64_t parse_u64_or_throw(const std::string& token, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE ||
      token.find('-') != std::string::npos)
    throw ConfigError(where + ": expected an unsigned integer, got '" + token + "'");
  return v;
}

// Comma list whose tokens are numbers or inclusive start:step:stop ranges.
std::vector<double> parse_value_grid(const std::string& value, const std::string& where) {
  std::vector<double> out;
  for (const std::string& raw : split(value, ',')) {
    const std::string token = trim(raw);
    if (token.empty()) throw ConfigError(where + ": empty list element");
    if (token.find(':') != std::string::npos) {
      const auto parts = split(token, ':');
      if (parts.size() != 3)
        throw ConfigError(where + ": range must be start:step:stop, got '" + token + "'");
      const double start = parse_double_or_throw(trim(parts[0]), where);
      const double step = parse_double_or_throw(trim(parts[1]), where);
      const double stop = parse_double_or_throw(trim(parts[2]), where);
      if (!(step > 0.0) || stop < start)
        throw ConfigError(where + ": range needs step > 0 and stop >= start");
      for (int i = 0;; ++i) {
        const double x = start + i * step;
        if (x > stop + 1e-9) break;
        out.push_back(x);
      }
    } else {
      out.push_back(parse_double_or_throw(token, where));
    }
  }
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::string fmt_g6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

RunConfig default_run_config() { return {default_paper_plan()}; }

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");

  std::vector<ConfigEntry> entries;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "plan" && section.rfind("estimators.", 0) != 0)
        throw ConfigError(where + ": unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key = value");
    if (section.empty())
      throw ConfigError(where + ": key outside of a section");
    entries.push_back({lineno, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }

  RunConfig cfg = default_run_config();
  SweepPlan& plan = cfg.plan;
  std::vector<double> snr_values = plan.axis_values;
  std::vector<double> amplitude_values;
  {
    const SweepPlan amp = default_amplitude_plan();
    amplitude_values = amp.axis_values;
  }

  for (const ConfigEntry& e : entries) {
    if (e.section != "plan") continue;
    const std::string where = path + ":" + std::to_string(e.lineno);
    if (e.key == "scenarios") {
      plan.scenarios.clear();
      if (trim(e.value) == "all") {
        plan.scenarios = canonical_scenarios();
      } else {
        for (const std::string& raw : split(e.value, ',')) {
          const std::string name = trim(raw);
          try {
            plan.scenarios.push_back(scenario_by_name(name));
          } catch (const ConfigError& err) {
            throw ConfigError(where + ": " + err.what());
          }
        }
      }
    } else if (e.key == "methods") {
      plan.methods.clear();
      std::set<std::string> seen;
      std::vector<std::string> names;
      if (trim(e.value) == "all") {
        for (Method m : all_methods) names.push_back(method_name(m));
      } else {
        for (const std::string& raw : split(e.value, ',')) names.push_back(trim(raw));
      }
      for (const std::string& name : names) {
        if (!seen.insert(name).second)
          throw ConfigError(where + ": duplicate method '" + name + "'");
        EstimatorConfig mc;
        try {
          mc.method = parse_method(name);
        } catch (const ConfigError& err) {
          throw ConfigError(where + ": " + err.what());
        }
        plan.methods.push_back(mc);
      }
    } else if (e.key == "axis") {
      try {
        plan.axis = parse_axis_kind(trim(e.value));
      } catch (const ConfigError& err) {
        throw ConfigError(where + ": " + err.what());
      }
    } else if (e.key == "snr_values") {
      snr_values = parse_value_grid(e.value, where);
    } else if (e.key == "amplitude_values") {
      amplitude_values = parse_value_grid(e.value, where);
    } else if (e.key == "iterations") {
      plan.iterations = static_cast<int>(parse_int_or_throw(e.value, where));
    } else if (e.key == "base_seed") {
      plan.base_seed = parse_u64_or_throw(e.value, where);
    } else if (e.key == "n_samples") {
      plan.n_samples = static_cast<int>(parse_int_or_throw(e.value, where));
    } else if (e.key == "fs_hz") {
      plan.fs_hz = parse_double_or_throw(e.value, where);
    } else if (e.key == "snr_db") {
      plan.fixed_snr_db = parse_double_or_throw(e.value, where);
    } else if (e.key == "sideband_scale") {
      plan.fixed_sideband_scale = parse_double_or_throw(e.value, where);
    } else {
      throw ConfigError(where + ": unknown key '" + e.key + "' in [plan]");
    }
  }

  plan.axis_values = plan.axis == AxisKind::Snr ? snr_values : amplitude_values;

  for (const ConfigEntry& e : entries) {
    if (e.section == "plan") continue;
    const std::string where = path + ":" + std::to_string(e.lineno);
    const std::string name = e.section.substr(std::string("estimators.").size());
    Method method;
    try {
      method = parse_method(name);
    } catch (const ConfigError& err) {
      throw ConfigError(where + ": " + err.what());
    }
    EstimatorConfig* target = nullptr;
    for (auto& mc : plan.methods)
      if (mc.method == method) target = &mc;
    if (!target)
      throw ConfigError(where + ": section [estimators." + name +
                        "] names a method not enabled by plan.methods");
    if (e.key == "p") {
      target->p_real = static_cast<int>(parse_int_or_throw(e.value, where));
    } else if (e.key == "m_dim") {
      target->m_dim = static_cast<int>(parse_int_or_throw(e.value, where));
    } else if (e.key == "grid_size") {
      target->grid_size = static_cast<int>(parse_int_or_throw(e.value, where));
    } else if (e.key == "corr") {
      try {
        target->corr = parse_correlation_method(trim(e.value));
      } catch (const ConfigError& err) {
        throw ConfigError(where + ": " + err.what());
      }
    } else {
      throw ConfigError(where + ": unknown key '" + e.key + "' in [" + e.section + "]");
    }
  }

  try {
    plan.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(path + ": invalid plan: " + err.what());
  }
  return cfg;
}

std::string accuracy_class_name(int c) {
  switch (c) {
    case 0: return "very high";
    case 1: return "high";
    case 2: return "medium";
    case 3: return "low";
  }
  throw std::invalid_argument("accuracy_class_name: class must be 0..3");
}

std::string time_class_name(int c) {
  switch (c) {
    case 0: return "small";
    case 1: return "medium";
    case 2: return "high";
  }
  throw std::invalid_argument("time_class_name: class must be 0..2");
}

Ranking build_ranking(const BenchmarkTable& table, double snr_threshold) {
  struct Acc {
    std::vector<double> qualifying_mse;
    std::vector<double> all_mse;
    std::vector<double> cell_median_times;
    long failures = 0;
  };
  std::map<Method, Acc> by_method;
  std::vector<Method> order;
  bool any_qualifying = false;
  for (const BenchRow& row : table.rows) {
    if (!row.pooled) continue;
    auto [it, inserted] = by_method.try_emplace(row.method);
    if (inserted) order.push_back(row.method);
    Acc& acc = it->second;
    acc.all_mse.push_back(row.pooled_mse_hz2);
    if (row.axis_value >= snr_threshold) {
      acc.qualifying_mse.push_back(row.pooled_mse_hz2);
      any_qualifying = true;
    }
    acc.cell_median_times.push_back(row.median_time_s);
    acc.failures += row.failures;
  }
  if (by_method.empty())
    throw IoError("benchmark table holds no pooled rows to rank");

  Ranking ranking;
  ranking.snr_threshold = snr_threshold;
  ranking.threshold_applied = any_qualifying;

  for (Method m : order) {
    const Acc& acc = by_method.at(m);
    MethodRanking entry;
    entry.method = m;
    const std::vector<double>& basis =
        (any_qualifying && !acc.qualifying_mse.empty()) ? acc.qualifying_mse
                                                        : acc.all_mse;
    entry.mean_mse_hz2 = detail::mean(basis);
    std::vector<double> finite_times;
    for (double t : acc.cell_median_times)
      if (std::isfinite(t)) finite_times.push_back(t);
    entry.median_time_s = detail::median(std::move(finite_times));
    entry.failures = acc.failures;
    ranking.entries.push_back(entry);
  }

  std::vector<double> mses;
  for (const auto& e : ranking.entries) mses.push_back(e.mean_mse_hz2);
  std::sort(mses.begin(), mses.end());
  const double q1 = quantile_sorted(mses, 0.25);
  const double q2 = quantile_sorted(mses, 0.50);
  const double q3 = quantile_sorted(mses, 0.75);

  std::vector<double> times;
  for (const auto& e : ranking.entries)
    if (std::isfinite(e.median_time_s)) times.push_back(e.median_time_s);
  std::sort(times.begin(), times.end());

  for (auto& e : ranking.entries) {
    e.accuracy_class = e.mean_mse_hz2 <= q1   ? 0
                       : e.mean_mse_hz2 <= q2 ? 1
                       : e.mean_mse_hz2 <= q3 ? 2
                                              : 3;
    if (times.empty() || !std::isfinite(e.median_time_s)) {
      e.time_class = 2;
    } else {
      const double t1 = quantile_sorted(times, 1.0 / 3.0);
      const double t2 = quantile_sorted(times, 2.0 / 3.0);
      e.time_class = e.median_time_s <= t1 ? 0 : e.median_time_s <= t2 ? 1 : 2;
    }
  }

  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const MethodRanking& a, const MethodRanking& b) {
              if (a.accuracy_class != b.accuracy_class)
                return a.accuracy_class < b.accuracy_class;
              if (a.time_class != b.time_class) return a.time_class < b.time_class;
              if (a.mean_mse_hz2 != b.mean_mse_hz2)
                return a.mean_mse_hz2 < b.mean_mse_hz2;
              const double ta = std::isfinite(a.median_time_s)
                                    ? a.median_time_s
                                    : std::numeric_limits<double>::infinity();
              const double tb = std::isfinite(b.median_time_s)
                                    ? b.median_time_s
                                    : std::numeric_limits<double>::infinity();
              if (ta != tb) return ta < tb;
              return method_name(a.method) < method_name(b.method);
            });
  for (std::size_t i = 0; i < ranking.entries.size(); ++i)
    ranking.entries[i].rank = static_cast<int>(i + 1);
  return ranking;
}

std::string render_report_markdown(const BenchmarkTable& table, const Ranking& ranking) {
  std::set<std::string> scenario_set;
  std::vector<std::string> scenarios;
  std::size_t cells = 0;
  for (const BenchRow& row : table.rows) {
    if (!row.pooled) continue;
    ++cells;
    if (scenario_set.insert(row.scenario).second) scenarios.push_back(row.scenario);
  }

  std::ostringstream md;
  md << "# Estimator benchmark report\n\n";
  md << "Input: " << cells << " cells over " << scenarios.size() << " scenario(s).\n\n";
  if (ranking.threshold_applied)
    md << "Accuracy classes: quartiles of mean pooled MSE over axis points >= "
       << fmt_g6(ranking.snr_threshold) << ".\n";
  else
    md << "Accuracy classes: quartiles of mean pooled MSE over all axis points "
          "(no axis point reached the threshold "
       << fmt_g6(ranking.snr_threshold) << ").\n";
  md << "Time classes: tertiles of the median per-window time.\n\n";

  md << "## Ranking\n\n";
  md << "| Rank | Method | Accuracy | Time | Mean pooled MSE (Hz^2) | Median time (s) | Failures |\n";
  md << "|---:|:---|:---|:---|---:|---:|---:|\n";
  for (const MethodRanking& e : ranking.entries)
    md << "| " << e.rank << " | " << method_name(e.method) << " | "
       << accuracy_class_name(e.accuracy_class) << " | "
       << time_class_name(e.time_class) << " | " << fmt_g6(e.mean_mse_hz2) << " | "
       << fmt_g6(e.median_time_s) << " | " << e.failures << " |\n";

  struct TimeAcc {
    std::vector<double> means, medians;
    long failures = 0;
    long windows = 0;
  };
  std::map<std::string, TimeAcc> timing;
  for (const BenchRow& row : table.rows) {
    if (!row.pooled) continue;
    TimeAcc& acc = timing[method_name(row.method)];
    if (std::isfinite(row.mean_time_s)) acc.means.push_back(row.mean_time_s);
    if (std::isfinite(row.median_time_s)) acc.medians.push_back(row.median_time_s);
    acc.failures += row.failures;
    acc.windows += row.iterations;
  }

  md << "\n## Timing\n\n";
  md << "| Method | Mean time (s) | Median time (s) |\n";
  md << "|:---|---:|---:|\n";
  for (const auto& [name, acc] : timing)
    md << "| " << name << " | " << fmt_g6(detail::mean(acc.means)) << " | "
       << fmt_g6(detail::median(acc.medians)) << " |\n";

  md << "\n## Failures\n\n";
  md << "| Method | Failed windows | Total windows |\n";
  md << "|:---|---:|---:|\n";
  for (const auto& [name, acc] : timing)
    md << "| " << name << " | " << acc.failures << " | " << acc.windows << " |\n";

  md << "\n## Plot data\n\n";
  for (const std::string& s : scenarios)
    md << "- mse_" << s << ".csv, variance_" << s << ".csv\n";
  return md.str();
}

std::string render_ranking_csv(const Ranking& ranking) {
  std::ostringstream out;
  out << "rank,method,accuracy_class,time_class,mean_pooled_mse_hz2,median_time_s,failures\n";
  for (const MethodRanking& e : ranking.entries)
    out << e.rank << "," << method_name(e.method) << ","
        << accuracy_class_name(e.accuracy_class) << "," << time_class_name(e.time_class)
        << "," << fmt_g17(e.mean_mse_hz2) << "," << fmt_g17(e.median_time_s) << ","
        << e.failures << "\n";
  return out.str();
}

std::vector<std::string> write_plot_data(const std::string& out_dir,
                                         const BenchmarkTable& table) {
  std::vector<std::string> scenarios;
  std::set<std::string> scenario_set;
  std::set<std::string> method_names;
  for (const BenchRow& row : table.rows) {
    if (!row.pooled) continue;
    if (scenario_set.insert(row.scenario).second) scenarios.push_back(row.scenario);
    method_names.insert(method_name(row.method));
  }

  std::vector<std::string> written;
  for (const std::string& scenario : scenarios) {
    std::vector<double> axis;
    std::set<double> axis_set;
    std::map<std::pair<double, std::string>, std::pair<double, double>> values;
    for (const BenchRow& row : table.rows) {
      if (!row.pooled || row.scenario != scenario) continue;
      if (axis_set.insert(row.axis_value).second) axis.push_back(row.axis_value);
      values[{row.axis_value, method_name(row.method)}] = {row.pooled_mse_hz2,
                                                           row.variance_hz2};
    }
    std::sort(axis.begin(), axis.end());

    for (const bool variance : {false, true}) {
      const std::string path = out_dir + "/" + (variance ? "variance_" : "mse_") +
                               scenario + ".csv";
      std::ofstream out(path);
      if (!out) throw IoError("cannot open '" + path + "' for writing");
      out << "axis_value";
      for (const std::string& m : method_names) out << "," << m;
      out << "\n";
      for (double a : axis) {
        out << fmt_g17(a);
        for (const std::string& m : method_names) {
          const auto it = values.find({a, m});
          const double v = it == values.end()
                               ? std::numeric_limits<double>::quiet_NaN()
                               : (variance ? it->second.second : it->second.first);
          out << "," << fmt_g17(v);
        }
        out << "\n";
      }
      if (!out) throw IoError("short write to '" + path + "'");
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace hrfe
