#pragma once

#include <optional>

#include "caracore/errors.hpp"
#include "caracore/matrix.hpp"

namespace caracore {

/// A nonzero v with M v = 0, for a matrix with more columns than rows.
/// Chosen as the right singular vector of the smallest singular value, so the
/// result is deterministic for a fixed input.
template <class Scalar>
Vector<Scalar> nullspace_vector(const Matrix<Scalar>& m) {
  if (m.cols() <= m.rows())
    throw DimensionMismatch("nullspace_vector: more columns than rows required");
  if (!all_finite(m)) throw NonFinite("nullspace_vector: non-finite input");
  Eigen::JacobiSVD<Matrix<Scalar>> svd(m, Eigen::ComputeFullV);
  Vector<Scalar> v = svd.matrixV().col(m.cols() - 1);
  if (!(v.norm() > Scalar(0)))
    throw DegenerateNullspace("nullspace_vector: zero candidate");
  return v;
}

template <class Scalar>
struct ThinSvd {
  Matrix<Scalar> u;                // orthonormal columns
  Vector<Scalar> singular_values;  // nonnegative, nonincreasing
  Matrix<Scalar> v;                // orthonormal columns

  Matrix<Scalar> reconstruct() const {
    return u * singular_values.asDiagonal() * v.transpose();
  }
};

template <class Scalar>
ThinSvd<Scalar> thin_svd(const Matrix<Scalar>& m) {
  if (!all_finite(m)) throw NonFinite("thin_svd: non-finite input");
  Eigen::JacobiSVD<Matrix<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return ThinSvd<Scalar>{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

/// Lower-triangular L with L L^T = M, or nullopt when M is not positive
/// definite. The failure is an expected outcome (e.g. for Gram matrices
/// accumulated in low precision), so it is returned as data rather than
/// thrown. Input must be square and symmetric within 1e-9 relative.
template <class Scalar>
std::optional<Matrix<Scalar>> cholesky(const Matrix<Scalar>& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("cholesky: square input required");
  if (!all_finite(m)) throw NonFinite("cholesky: non-finite input");
  const double scale = m.template cast<double>().norm();
  const double asym = (m - m.transpose()).template cast<double>().norm();
  if (asym > 1e-9 * scale)
    throw std::invalid_argument("cholesky: input not symmetric");
  Eigen::LLT<Matrix<Scalar>> llt(m);
  if (llt.info() != Eigen::Success) return std::nullopt;
  return Matrix<Scalar>(llt.matrixL());
}

/// Orthonormal basis of the column span (thin Q factor of a Householder QR).
template <class Scalar>
Matrix<Scalar> orthonormalize(const Matrix<Scalar>& m) {
  Eigen::HouseholderQR<Matrix<Scalar>> qr(m);
  Matrix<Scalar> q = Matrix<Scalar>::Identity(m.rows(), m.cols());
  return qr.householderQ() * q;
}

}  // namespace caracore
