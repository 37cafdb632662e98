#include "hrfe/fault_signatures.hpp"

#include <cmath>
#include <stdexcept>

namespace hrfe {

namespace {

void check_f0(double f0) {
  if (!(f0 > 0.0)) throw std::invalid_argument("supply frequency must be positive");
}

std::pair<double, double> ordered_abs(double lo, double hi) {
  lo = std::fabs(lo);
  hi = std::fabs(hi);
  return lo <= hi ? std::make_pair(lo, hi) : std::make_pair(hi, lo);
}

}  // namespace

std::pair<double, double> broken_rotor_freqs(double f0_hz, double slip,
                                             int pole_pairs, int harmonic_k) {
  check_f0(f0_hz);
  if (!(slip >= 0.0 && slip < 1.0))
    throw std::invalid_argument("slip must lie in [0, 1)");
  if (pole_pairs < 1) throw std::invalid_argument("pole_pairs must be >= 1");
  if (harmonic_k < 1 || harmonic_k % 2 == 0)
    throw std::invalid_argument("rotor-bar harmonic index must be odd and >= 1");
  const double base = harmonic_k * (1.0 - slip) / pole_pairs;
  return ordered_abs(f0_hz * (base - slip), f0_hz * (base + slip));
}

std::pair<double, double> bearing_freqs(double f0_hz, Race race, int n_balls,
                                        double rotor_hz) {
  check_f0(f0_hz);
  if (n_balls < 1) throw std::invalid_argument("rolling-element count must be >= 1");
  if (!(rotor_hz > 0.0)) throw std::invalid_argument("rotor frequency must be positive");
  const double factor = race == Race::Outer ? 0.4 : 0.6;
  const double fd = factor * n_balls * rotor_hz;
  return ordered_abs(f0_hz - fd, f0_hz + fd);
}

std::pair<double, double> misalignment_freqs(double f0_hz, double rotor_hz,
                                             int harmonic_k) {
  check_f0(f0_hz);
  if (!(rotor_hz > 0.0)) throw std::invalid_argument("rotor frequency must be positive");
  if (harmonic_k < 1) throw std::invalid_argument("harmonic index must be >= 1");
  return ordered_abs(f0_hz - harmonic_k * rotor_hz, f0_hz + harmonic_k * rotor_hz);
}

std::pair<double, double> eccentricity_freqs(double f0_hz, double slip,
                                             int pole_pairs, int order_m) {
  check_f0(f0_hz);
  if (!(slip >= 0.0 && slip <= 1.0))
    throw std::invalid_argument("slip must lie in [0, 1]");
  if (pole_pairs < 1) throw std::invalid_argument("pole_pairs must be >= 1");
  if (order_m < 1) throw std::invalid_argument("eccentricity order must be >= 1");
  const double shift = order_m * (1.0 - slip) / pole_pairs;
  return ordered_abs(f0_hz * (1.0 - shift), f0_hz * (1.0 + shift));
}

const std::vector<FaultScenario>& canonical_scenarios() {
  static const std::vector<FaultScenario> table = [] {
    const Component fund{50.0, 10.0, 0.0};
    auto side = [](double f) { return Component{f, 1.0, 0.0}; };
    std::vector<FaultScenario> v;
    v.push_back({"broken-rotor", fund, {side(22.53), side(70.83)}});
    v.push_back({"inner-bearing", fund, {side(89.25), side(367.74)}});
    v.push_back({"misalignment", fund, {side(79.01), side(137.03)}});
    v.push_back({"eccentricity", fund, {side(74.18), side(98.35)}});
    return v;
  }();
  return table;
}

const FaultScenario& scenario_by_name(const std::string& name) {
  for (const auto& s : canonical_scenarios())
    if (s.name == name) return s;
  std::string valid;
  for (const auto& s : canonical_scenarios()) {
    if (!valid.empty()) valid += ", ";
    valid += s.name;
  }
  throw ConfigError("unknown scenario '" + name + "' (valid: " + valid + ")");
}

}  // namespace hrfe
