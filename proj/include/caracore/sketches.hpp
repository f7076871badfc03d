#pragma once

#include <optional>

#include "caracore/errors.hpp"
#include "caracore/linalg.hpp"
#include "caracore/matrix.hpp"

namespace caracore {

/// Gram matrix of (A | b) accumulated one outer product at a time, in
/// ascending row order, entirely in Scalar precision. The fixed order makes
/// the low-precision rounding error bitwise reproducible.
template <class Scalar>
Matrix<Scalar> accumulate_gram(const Matrix<Scalar>& a, const Vector<Scalar>& b) {
  if (a.rows() != b.size())
    throw DimensionMismatch("accumulate_gram: rows of A must match b");
  if (a.rows() < 1 || a.cols() < 1) throw EmptyInput("accumulate_gram: nonempty input");
  const Index d = a.cols();
  Matrix<Scalar> gram = Matrix<Scalar>::Zero(d + 1, d + 1);
  Vector<Scalar> row(d + 1);
  for (Index i = 0; i < a.rows(); ++i) {
    row.head(d) = a.row(i).transpose();
    row(d) = b(i);
    gram.noalias() += row * row.transpose();
  }
  return gram;
}

/// Sketch of (A | b) through a Cholesky factor of the accumulated Gram
/// matrix; the not-positive-definite outcome is expected under low-precision
/// accumulation and is returned as data.
template <class Scalar>
std::optional<Matrix<Scalar>> sketch_cholesky(const Matrix<Scalar>& a,
                                              const Vector<Scalar>& b) {
  return cholesky(accumulate_gram(a, b));
}

/// Sketch of (A | b) as sqrt(D) V^T from the SVD of the accumulated Gram
/// matrix; always succeeds.
template <class Scalar>
Matrix<Scalar> sketch_svd(const Matrix<Scalar>& a, const Vector<Scalar>& b) {
  const ThinSvd<Scalar> svd = thin_svd(accumulate_gram(a, b));
  return svd.singular_values.cwiseMax(Scalar(0)).cwiseSqrt().asDiagonal() *
         svd.v.transpose();
}

/// Direct linear-regression baseline: maintains A^T A and A^T b in Scalar
/// precision (ascending row order) and solves once.
template <class Scalar>
Vector<Scalar> sketch_inverse(const Matrix<Scalar>& a, const Vector<Scalar>& b) {
  if (a.rows() != b.size())
    throw DimensionMismatch("sketch_inverse: rows of A must match b");
  if (a.rows() < 1 || a.cols() < 1) throw EmptyInput("sketch_inverse: nonempty input");
  const Index d = a.cols();
  Matrix<Scalar> gram = Matrix<Scalar>::Zero(d, d);
  Vector<Scalar> rhs = Vector<Scalar>::Zero(d);
  for (Index i = 0; i < a.rows(); ++i) {
    gram.noalias() += a.row(i).transpose() * a.row(i);
    rhs.noalias() += b(i) * a.row(i).transpose();
  }
  Eigen::FullPivLU<Matrix<Scalar>> lu(gram);
  if (!lu.isInvertible())
    throw Singular("sketch_inverse: accumulated normal matrix is singular");
  return lu.solve(rhs);
}

}  // namespace caracore
