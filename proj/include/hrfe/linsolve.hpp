#pragma once

#include "hrfe/types.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <Eigen/LU>

#include <stdexcept>
#include <string>

namespace hrfe {

// Overdetermined least squares via column-pivoted QR.  A detected rank
// deficiency is an EstimationError carrying the effective rank.
template <typename T>
VecX<T> least_squares(const MatX<T>& a, const VecX<T>& b) {
  if (a.cols() < 1 || a.rows() < a.cols())
    throw std::invalid_argument("least_squares: need rows >= cols >= 1");
  if (b.size() != a.rows())
    throw std::invalid_argument("least_squares: rhs length must match rows");
  Eigen::ColPivHouseholderQR<MatX<T>> qr(a);
  if (qr.rank() < a.cols())
    throw EstimationError("least_squares: rank-deficient system (effective rank " +
                          std::to_string(qr.rank()) + " of " +
                          std::to_string(a.cols()) + " columns)");
  return qr.solve(b);
}

// Total least squares rotation between equally shaped blocks S1, S2:
// SVD of the stacked [S1 S2], partition of the right singular basis, and
// psi = -V12 V22^-1.  A singular V22 is a degenerate-rotation failure.
template <typename T>
MatX<T> tls_solve(const MatX<T>& s1, const MatX<T>& s2) {
  if (s1.rows() != s2.rows() || s1.cols() != s2.cols())
    throw std::invalid_argument("tls_solve: blocks must share a shape");
  const Index c = s1.cols();
  if (c < 1 || s1.rows() < c)
    throw std::invalid_argument("tls_solve: need rows >= cols >= 1");
  MatX<T> stacked(s1.rows(), 2 * c);
  stacked << s1, s2;
  Eigen::JacobiSVD<MatX<T>> svd(stacked, Eigen::ComputeFullV);
  const MatX<T> v12 = svd.matrixV().block(0, c, c, c);
  const MatX<T> v22 = svd.matrixV().block(c, c, c, c);
  Eigen::FullPivLU<MatX<T>> lu(v22);
  if (!lu.isInvertible())
    throw EstimationError("tls_solve: degenerate rotation (V22 is singular)");
  return -v12 * lu.inverse();
}

}  // namespace hrfe
