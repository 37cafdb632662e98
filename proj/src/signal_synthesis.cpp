#include "hrfe/signal_synthesis.hpp"

#include "hrfe/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace hrfe {

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676655900577;
}

void SignalSpec::validate() const {
  if (!(fs_hz > 0.0)) throw std::invalid_argument("sample rate must be positive");
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  int active = 0;
  for (const auto& c : components) {
    if (!(c.amplitude >= 0.0))
      throw std::invalid_argument("component amplitude must be >= 0");
    if (!(c.freq_hz >= 0.0) || !(c.freq_hz < fs_hz / 2.0))
      throw std::invalid_argument("component frequency must lie in [0, fs/2)");
    if (!std::isfinite(c.phase_rad))
      throw std::invalid_argument("component phase must be finite");
    if (c.amplitude > 0.0) ++active;
  }
  if (n_samples < 4 * active)
    throw std::invalid_argument("window must hold at least 4 samples per component");
  if (snr_db && !std::isfinite(*snr_db))
    throw std::invalid_argument("snr_db must be finite");
}

double snr_to_noise_variance(const std::vector<Component>& components,
                             double snr_db) {
  double power = 0.0;
  for (const auto& c : components) power += 0.5 * c.amplitude * c.amplitude;
  if (!(power > 0.0))
    throw std::invalid_argument("SNR is undefined for zero signal power");
  return power / std::pow(10.0, snr_db / 10.0);
}

SampleWindow synthesize(const SignalSpec& spec) {
  spec.validate();
  VecXd x = VecXd::Zero(spec.n_samples);
  for (const auto& c : spec.components) {
    if (c.amplitude == 0.0) continue;
    const double w = kTwoPi * c.freq_hz / spec.fs_hz;
    for (int i = 0; i < spec.n_samples; ++i)
      x[i] += c.amplitude * std::cos(w * i + c.phase_rad);
  }
  if (spec.snr_db) {
    const double sigma =
        std::sqrt(snr_to_noise_variance(spec.components, *spec.snr_db));
    GaussianStream g(spec.seed);
    for (int i = 0; i < spec.n_samples; ++i) x[i] += sigma * g.normal();
  }
  return {std::move(x), spec.fs_hz, spec};
}

SignalSpec scenario_to_spec(const FaultScenario& scenario, int n_samples,
                            double fs_hz, std::optional<double> snr_db,
                            std::uint64_t seed,
                            std::optional<double> sideband_scale) {
  SignalSpec spec;
  spec.n_samples = n_samples;
  spec.fs_hz = fs_hz;
  spec.snr_db = snr_db;
  spec.seed = seed;
  auto push = [&spec](Component c) {
    if (c.amplitude > 0.0) spec.components.push_back(c);
  };
  push(scenario.fundamental);
  for (Component s : scenario.sidebands) {
    if (sideband_scale) s.amplitude = *sideband_scale * scenario.fundamental.amplitude;
    push(s);
  }
  spec.validate();
  return spec;
}

}  // namespace hrfe
