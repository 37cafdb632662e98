#include "hrfe/sample_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace hrfe {

namespace {

std::string meta_path(const std::string& path) { return path + ".meta"; }

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

double parse_double(const std::string& token, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE)
    throw IoError(where + ": bad numeric value '" + token + "'");
  return v;
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

}  // namespace

void write_window_csv(const std::string& path, const SampleWindow& window) {
  std::ofstream csv(path);
  if (!csv) throw IoError("cannot open '" + path + "' for writing");
  csv << "amplitude_a\n";
  for (Index i = 0; i < window.samples.size(); ++i)
    csv << fmt_g17(window.samples[i]) << "\n";
  if (!csv) throw IoError("short write to '" + path + "'");

  std::ofstream meta(meta_path(path));
  if (!meta) throw IoError("cannot open '" + meta_path(path) + "' for writing");
  meta << "fs_hz=" << fmt_g17(window.fs_hz) << "\n";
  meta << "n_samples=" << window.samples.size() << "\n";
  if (window.origin) {
    const SignalSpec& spec = *window.origin;
    meta << "seed=" << spec.seed << "\n";
    if (spec.snr_db) meta << "snr_db=" << fmt_g17(*spec.snr_db) << "\n";
    for (std::size_t i = 0; i < spec.components.size(); ++i) {
      const Component& c = spec.components[i];
      meta << "component." << i << "=" << fmt_g17(c.freq_hz) << ","
           << fmt_g17(c.amplitude) << "," << fmt_g17(c.phase_rad) << "\n";
    }
  }
  if (!meta) throw IoError("short write to '" + meta_path(path) + "'");
}

SampleWindow read_window_csv(const std::string& path,
                             std::optional<double> fs_override) {
  std::ifstream csv(path);
  if (!csv) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(csv, line)) throw IoError("'" + path + "' is empty");
  strip_cr(line);
  if (line != "amplitude_a")
    throw IoError("'" + path + "': expected header 'amplitude_a', got '" + line + "'");
  std::vector<double> values;
  while (std::getline(csv, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    values.push_back(parse_double(line, path));
  }
  if (values.empty()) throw IoError("'" + path + "' holds no samples");

  SampleWindow w;
  w.samples = Eigen::Map<const VecXd>(values.data(), static_cast<Index>(values.size()));

  std::optional<double> fs_meta;
  SignalSpec spec;
  bool have_spec_fields = false;
  std::ifstream meta(meta_path(path));
  if (meta) {
    std::vector<std::pair<std::size_t, Component>> comps;
    while (std::getline(meta, line)) {
      strip_cr(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw IoError("'" + meta_path(path) + "': expected key=value, got '" + line + "'");
      const std::string key = line.substr(0, eq);
      const std::string value = line.substr(eq + 1);
      if (key == "fs_hz") {
        fs_meta = parse_double(value, key);
      } else if (key == "n_samples") {
        if (parse_double(value, key) != static_cast<double>(values.size()))
          throw IoError("'" + meta_path(path) + "': n_samples disagrees with the CSV");
      } else if (key == "seed") {
        spec.seed = std::strtoull(value.c_str(), nullptr, 10);
        have_spec_fields = true;
      } else if (key == "snr_db") {
        spec.snr_db = parse_double(value, key);
        have_spec_fields = true;
      } else if (key.rfind("component.", 0) == 0) {
        const auto parts = split(value, ',');
        if (parts.size() != 3)
          throw IoError("'" + meta_path(path) + "': component needs freq,amp,phase");
        const std::size_t idx = std::strtoull(key.c_str() + 10, nullptr, 10);
        comps.push_back({idx, {parse_double(parts[0], key), parse_double(parts[1], key),
                               parse_double(parts[2], key)}});
        have_spec_fields = true;
      } else {
        throw IoError("'" + meta_path(path) + "': unknown key '" + key + "'");
      }
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [idx, c] : comps) spec.components.push_back(c);
  }

  if (fs_override)
    w.fs_hz = *fs_override;
  else if (fs_meta)
    w.fs_hz = *fs_meta;
  else
    throw IoError("sample rate unknown: '" + meta_path(path) +
                  "' is missing and no override was given");

  if (have_spec_fields && !spec.components.empty()) {
    spec.fs_hz = w.fs_hz;
    spec.n_samples = static_cast<int>(values.size());
    w.origin = spec;
  }
  return w;
}

}  // namespace hrfe
