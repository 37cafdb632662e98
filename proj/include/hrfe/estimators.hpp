#pragma once

#include "hrfe/signal_synthesis.hpp"
#include "hrfe/subspace.hpp"
#include "hrfe/types.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace hrfe {

enum class Method {
  Prony,
  Pisarenko,
  RootMusic,
  FftMusic,
  Ev,
  EspritTls,
  MinNorm,
};

inline constexpr std::array<Method, 7> all_methods = {
    Method::Prony,   Method::Pisarenko, Method::RootMusic, Method::FftMusic,
    Method::Ev,      Method::EspritTls, Method::MinNorm,
};

std::string method_name(Method m);
// Throws ConfigError listing the valid identifiers.
Method parse_method(const std::string& name);

struct EstimatorConfig {
  Method method = Method::EspritTls;
  int p_real = 3;    // sinusoid count P; the model order is 2P
  int m_dim = 32;    // correlation matrix dimension (subspace methods)
  int grid_size = 4096;  // pseudospectrum FFT length (grid methods)
  CorrelationMethod corr = CorrelationMethod::Covariance;

  void validate() const;  // std::invalid_argument on violations
};

struct EstimateSet {
  std::vector<double> frequencies_hz;  // ascending, size p_real
  std::optional<std::vector<double>> amplitudes;
  Method method = Method::EspritTls;
  double elapsed_s = 0.0;  // filled by the timed dispatch
  EstimatorConfig config;
  std::vector<std::string> warnings;
};

struct Pseudospectrum {
  VecXd freqs_hz;  // grid_size/2 + 1 points spanning [0, fs/2]
  VecXd values;
};

// Timed dispatch to the configured method; only the numeric work is timed.
EstimateSet estimate(const SampleWindow& window, const EstimatorConfig& config);

// Linear-prediction (least squares) Prony of order 2P: prediction
// coefficients by QR, characteristic roots, P frequencies from the roots
// with positive imaginary part, largest modulus first.
EstimateSet prony_estimate(const SampleWindow& window, const EstimatorConfig& config);

// Smallest eigenvector of the (2P+1)-dimensional correlation matrix as the
// noise polynomial; m_dim in the config is ignored.
EstimateSet pisarenko_estimate(const SampleWindow& window, const EstimatorConfig& config);

// Noise-subspace polynomial from diagonal sums of G G^T, rooted; the 2P
// roots strictly inside the unit circle with largest modulus are paired
// into P frequencies.
EstimateSet root_music_estimate(const SampleWindow& window, const EstimatorConfig& config);

// Grid search of the MUSIC pseudospectrum 1/||G^H e(f)||^2 evaluated with a
// zero-padded FFT per noise eigenvector, parabolic peak refinement.
EstimateSet fft_music_estimate(const SampleWindow& window, const EstimatorConfig& config);

// Eigenvector method: like fft-music with each noise eigenvector weighted by
// the inverse of its eigenvalue (clamped away from zero, flagged).
EstimateSet ev_estimate(const SampleWindow& window, const EstimatorConfig& config);

// Shift-invariance rotation between the upper and lower signal-basis blocks
// solved by total least squares; frequencies from the rotation eigenvalues.
EstimateSet esprit_tls_estimate(const SampleWindow& window, const EstimatorConfig& config);

// Minimum-norm vector: projection of the first coordinate onto the noise
// subspace, first element normalized to one, searched on the grid.
EstimateSet min_norm_estimate(const SampleWindow& window, const EstimatorConfig& config);

// Pseudospectrum of the grid methods (fft-music, ev, min-norm) for plotting.
Pseudospectrum pseudospectrum(const SampleWindow& window, const EstimatorConfig& config);

// Joint cos/sin least-squares fit at known frequencies; returns amplitudes
// in input order.  Duplicated or zero frequencies surface as conditioning
// errors from the solver.
std::vector<double> estimate_amplitudes(const SampleWindow& window,
                                        const std::vector<double>& freqs_hz);

namespace detail {

// Coefficients (ascending, palindromic, length 2m-1) of the noise projection
// polynomial: diagonal sums of G G^T.
VecXd music_polynomial_coefficients(const MatXd& noise_basis);

// Indices of the `count` largest strict local maxima separated by at least
// min_separation bins; EstimationError when fewer exist.
std::vector<Index> pick_peaks(const VecXd& values, int count, Index min_separation);

// Vertex offset in [-0.5, 0.5] of the parabola through the reciprocal
// pseudospectrum (denominator) at bins k-1, k, k+1; 0 at the grid edges.
double refine_peak(const VecXd& denominator, Index k);

// 2P values approximately closed under conjugation -> P ascending
// frequencies in Hz: sort |arg|, average consecutive pairs.
std::vector<double> pair_conjugate_freqs(const std::vector<std::complex<double>>& zs,
                                         double fs_hz);

}  // namespace detail

}  // namespace hrfe
