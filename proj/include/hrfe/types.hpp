#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace hrfe {

using Index = Eigen::Index;

template <typename T>
using VecX = Eigen::Vector<T, Eigen::Dynamic>;
template <typename T>
using MatX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using CVecX = Eigen::Vector<std::complex<T>, Eigen::Dynamic>;
template <typename T>
using CMatX = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;

using VecXd = VecX<double>;
using MatXd = MatX<double>;
using CVecXd = CVecX<double>;
using CMatXd = CMatX<double>;

// One term of a real sinusoidal model: a * cos(2*pi*f*n/fs + phi).
struct Component {
  double freq_hz = 0.0;
  double amplitude = 0.0;
  double phase_rad = 0.0;
};

// The input window does not support the requested model: rank deficiency,
// missing spectral peaks, degenerate subspaces.  Benchmark harness counts
// these as per-iteration failures instead of aborting a sweep.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical backend (eigensolver, SVD) did not converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration file, option value, or flag combination.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed data file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal form that round-trips a double exactly.
inline std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace hrfe
