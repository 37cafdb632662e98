#pragma once

#include "hrfe/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hrfe {

// Characteristic stator-current sideband pairs (lower, upper) in Hz for the
// supported induction-machine fault families.  f0 is the supply frequency,
// slip is per-unit, fr is the mechanical rotor frequency.

// Rotor-bar fault: f0 * (k*(1-s)/p -+ s), k odd.
std::pair<double, double> broken_rotor_freqs(double f0_hz, double slip,
                                             int pole_pairs, int harmonic_k);

enum class Race { Outer, Inner };

// Bearing defect: |f0 -+ fd| with fd = c * nb * fr, contact-geometry factor
// c = 0.4 for the outer race and 0.6 for the inner race.
std::pair<double, double> bearing_freqs(double f0_hz, Race race, int n_balls,
                                        double rotor_hz);

// Shaft misalignment: |f0 -+ k*fr|.
std::pair<double, double> misalignment_freqs(double f0_hz, double rotor_hz,
                                             int harmonic_k);

// Air-gap eccentricity: f0 * |1 -+ m*(1-s)/p|.
std::pair<double, double> eccentricity_freqs(double f0_hz, double slip,
                                             int pole_pairs, int order_m);

struct FaultScenario {
  std::string name;
  Component fundamental;
  std::vector<Component> sidebands;
};

// The four canonical benchmark scenarios: 50 Hz / 10 A / 0 rad fundamental,
// two 1 A sidebands each.  Sideband frequencies are stored literals.
const std::vector<FaultScenario>& canonical_scenarios();

// Lookup by scenario name; the error message lists the valid names.
const FaultScenario& scenario_by_name(const std::string& name);

}  // namespace hrfe
