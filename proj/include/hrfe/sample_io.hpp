#pragma once

#include "hrfe/signal_synthesis.hpp"

#include <optional>
#include <string>

namespace hrfe {

// Sample windows travel as a one-column CSV (header "amplitude_a", one %.17g
// value per line) plus a "<path>.meta" sidecar of key=value lines carrying
// fs_hz, n_samples and, when known, seed / snr_db / component.<i>=f,a,phi.
// 17 significant digits make the round trip lossless.

void write_window_csv(const std::string& path, const SampleWindow& window);

// Reads the CSV and its sidecar.  fs_override wins over the sidecar; with
// neither available the sample rate is unknown and an IoError is thrown.
SampleWindow read_window_csv(const std::string& path,
                             std::optional<double> fs_override = {});

}  // namespace hrfe
