#pragma once

#include "hrfe/fault_signatures.hpp"
#include "hrfe/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hrfe {

// Full recipe for one synthetic current window.  snr_db empty = noiseless.
struct SignalSpec {
  std::vector<Component> components;
  int n_samples = 1600;
  double fs_hz = 1000.0;
  std::optional<double> snr_db;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on aliased components, non-positive sample
  // rate, or a window shorter than 4 samples per active component.
  void validate() const;
};

struct SampleWindow {
  VecXd samples;
  double fs_hz = 0.0;
  // Populated when the window was synthesized here or loaded with a full
  // sidecar; external captures leave it empty.
  std::optional<SignalSpec> origin;
};

// White-noise variance that realizes snr_db against the deterministic signal
// power sum(a_k^2)/2.  Throws std::invalid_argument when that power is zero.
double snr_to_noise_variance(const std::vector<Component>& components,
                             double snr_db);

// Deterministic synthesis: component sum first, then one Gaussian stream
// seeded from spec.seed adds noise in sample order.
SampleWindow synthesize(const SignalSpec& spec);

// Expand a fault scenario into a SignalSpec.  sideband_scale, when given,
// replaces the stored sideband amplitudes with scale * fundamental amplitude.
// Zero-amplitude components are dropped before synthesis and model-order
// counting.
SignalSpec scenario_to_spec(const FaultScenario& scenario, int n_samples,
                            double fs_hz, std::optional<double> snr_db,
                            std::uint64_t seed,
                            std::optional<double> sideband_scale = {});

}  // namespace hrfe
