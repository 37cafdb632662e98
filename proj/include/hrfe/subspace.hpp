#pragma once

#include "hrfe/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace hrfe {

enum class CorrelationMethod { BiasedToeplitz, Covariance };

inline std::string correlation_method_name(CorrelationMethod m) {
  return m == CorrelationMethod::BiasedToeplitz ? "biased-toeplitz" : "covariance";
}

inline CorrelationMethod parse_correlation_method(const std::string& name) {
  if (name == "biased-toeplitz") return CorrelationMethod::BiasedToeplitz;
  if (name == "covariance") return CorrelationMethod::Covariance;
  throw ConfigError("unknown correlation method '" + name +
                    "' (valid: biased-toeplitz, covariance)");
}

template <typename T>
struct CorrelationEstimate {
  MatX<T> matrix;  // m_dim x m_dim, symmetric by construction
  CorrelationMethod method;
};

// Sample autocorrelation matrix of a real window.
//   biased-toeplitz: r[l] = (1/N) sum_i x[i+l] x[i], Toeplitz in the lags.
//   covariance:      R = (1/(N-M+1)) sum_i y_i y_i^T over sliding windows
//                    y_i = x[i..i+M-1]; exactly rank-2P for a noiseless sum
//                    of P real sinusoids.
template <typename T>
CorrelationEstimate<T> autocorrelation_matrix(const VecX<T>& x, Index m_dim,
                                              CorrelationMethod method) {
  const Index n = x.size();
  if (m_dim < 2) throw std::invalid_argument("autocorrelation_matrix: m_dim must be >= 2");
  if (n < 2 * m_dim)
    throw std::invalid_argument(
        "autocorrelation_matrix: window must hold at least 2*m_dim samples");
  MatX<T> r(m_dim, m_dim);
  if (method == CorrelationMethod::BiasedToeplitz) {
    VecX<T> lag(m_dim);
    for (Index l = 0; l < m_dim; ++l)
      lag[l] = x.head(n - l).dot(x.tail(n - l)) / static_cast<T>(n);
    for (Index i = 0; i < m_dim; ++i)
      for (Index j = 0; j < m_dim; ++j) r(i, j) = lag[std::abs(i - j)];
  } else {
    const Index rows = n - m_dim + 1;
    for (Index i = 0; i < m_dim; ++i)
      for (Index j = i; j < m_dim; ++j) {
        const T v = x.segment(i, rows).dot(x.segment(j, rows)) / static_cast<T>(rows);
        r(i, j) = v;
        r(j, i) = v;
      }
  }
  return {std::move(r), method};
}

// Eigendecomposition split into noise (leading) and signal (trailing)
// eigenvector columns; eigenvalues ascend.
template <typename T>
struct SubspaceSplit {
  VecX<T> eigenvalues;
  MatX<T> basis;
  Index p_signal;

  MatX<T> noise_basis() const { return basis.leftCols(basis.cols() - p_signal); }
  MatX<T> signal_basis() const { return basis.rightCols(p_signal); }
};

template <typename T>
SubspaceSplit<T> eig_hermitian_sorted(const CorrelationEstimate<T>& r,
                                      Index p_signal) {
  const Index m = r.matrix.rows();
  if (r.matrix.cols() != m)
    throw std::invalid_argument("eig_hermitian_sorted: matrix must be square");
  if (p_signal < 1 || p_signal >= m)
    throw std::invalid_argument("eig_hermitian_sorted: p_signal must lie in [1, m)");
  Eigen::SelfAdjointEigenSolver<MatX<T>> es(r.matrix);
  if (es.info() != Eigen::Success)
    throw NumericalError("eig_hermitian_sorted: eigensolver failed on a " +
                         std::to_string(m) + "x" + std::to_string(m) +
                         " matrix (Frobenius norm " + fmt_g17(r.matrix.norm()) + ")");
  return {es.eigenvalues(), es.eigenvectors(), p_signal};
}

// e(f)_k = exp(j 2 pi f k), k = 0..m-1, f in cycles/sample.
template <typename T>
CVecX<T> steering_vector(T normalized_freq, Index m_dim) {
  if (m_dim < 1) throw std::invalid_argument("steering_vector: m_dim must be >= 1");
  CVecX<T> e(m_dim);
  const T w = static_cast<T>(6.28318530717958647692528676655900577L) * normalized_freq;
  for (Index k = 0; k < m_dim; ++k)
    e[k] = std::complex<T>(std::cos(w * k), std::sin(w * k));
  return e;
}

}  // namespace hrfe
