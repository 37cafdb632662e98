#pragma once

#include "hrfe/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hrfe {

// Horner evaluation; coefficients ascend in power (c[0] + c[1] z + ...).
template <typename T>
std::complex<T> poly_eval(const CVecX<T>& coeffs, std::complex<T> z) {
  if (coeffs.size() == 0) throw std::invalid_argument("poly_eval: empty coefficients");
  std::complex<T> acc = coeffs[coeffs.size() - 1];
  for (Index k = coeffs.size() - 2; k >= 0; --k) acc = acc * z + coeffs[k];
  return acc;
}

template <typename T>
struct PolynomialRoots {
  CVecX<T> coefficients;  // as given
  CVecX<T> roots;         // sorted by (real, imag)
};

// All complex roots via the companion-matrix eigenproblem.  Exact-zero
// leading coefficients are stripped first; the remaining degree must be >= 1.
template <typename T>
PolynomialRoots<T> poly_roots(const CVecX<T>& coeffs) {
  Index deg = coeffs.size() - 1;
  while (deg >= 0 && coeffs[deg] == std::complex<T>(0)) --deg;
  if (deg < 1)
    throw std::invalid_argument("poly_roots: polynomial degree must be >= 1");

  CMatX<T> companion = CMatX<T>::Zero(deg, deg);
  for (Index i = 1; i < deg; ++i) companion(i, i - 1) = std::complex<T>(1);
  for (Index i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];

  Eigen::ComplexEigenSolver<CMatX<T>> es(companion, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericalError("poly_roots: companion eigensolver failed at degree " +
                         std::to_string(deg));
  CVecX<T> roots = es.eigenvalues();
  std::sort(roots.data(), roots.data() + roots.size(),
            [](const std::complex<T>& a, const std::complex<T>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  return {coeffs, std::move(roots)};
}

}  // namespace hrfe
