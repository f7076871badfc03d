#pragma once

#include <string>

#include "caracore/covariance.hpp"
#include "caracore/errors.hpp"
#include "caracore/linalg.hpp"
#include "caracore/matrix.hpp"

namespace caracore {

/// A (possibly translated) subspace query: Y spans the orthogonal complement
/// of a j-dimensional subspace, ell translates it. Only Y and ell enter
/// computations; j is validated for shape consistency.
template <class Scalar>
struct SubspaceQuery {
  Matrix<Scalar> Y;     // d x (d - j), orthonormal columns
  Vector<Scalar> ell;   // translation; zero for the linear (SVD) case
  Index j = 1;

  Index dim() const { return Y.rows(); }

  void validate() const {
    const Index d = Y.rows();
    if (j < 1 || j > d - 1)
      throw std::invalid_argument("SubspaceQuery: 1 <= j <= d-1 required");
    if (Y.cols() != d - j)
      throw DimensionMismatch("SubspaceQuery: Y must be d x (d-j)");
    if (ell.size() != d)
      throw DimensionMismatch("SubspaceQuery: ell must have dimension d");
    const double ortho =
        (Y.transpose() * Y - Matrix<Scalar>::Identity(Y.cols(), Y.cols()))
            .template cast<double>()
            .norm();
    const double tol = std::is_same_v<Scalar, float> ? 1e-4 : 1e-10;
    if (ortho > tol)
      throw std::invalid_argument("SubspaceQuery: columns of Y not orthonormal");
  }
};

/// sum_i ||(a_i - ell^T) Y||^2 over the rows of A, evaluated in double.
template <class Scalar>
double subspace_energy(const Matrix<Scalar>& a, const SubspaceQuery<Scalar>& q) {
  const MatrixD ad = a.template cast<double>();
  const MatrixD yd = q.Y.template cast<double>();
  const VectorD ld = q.ell.template cast<double>();
  const MatrixD projected = (ad.rowwise() - ld.transpose()) * yd;
  return projected.squaredNorm();
}

/// sum_i w_i ||(c_i - ell^T) Y||^2 over the rows of C.
template <class Scalar>
double weighted_subspace_energy(const Matrix<Scalar>& c, const Vector<Scalar>& w,
                                const SubspaceQuery<Scalar>& q) {
  const MatrixD cd = c.template cast<double>();
  const MatrixD yd = q.Y.template cast<double>();
  const VectorD ld = q.ell.template cast<double>();
  const MatrixD projected = (cd.rowwise() - ld.transpose()) * yd;
  return (projected.rowwise().squaredNorm().array() *
          w.template cast<double>().array())
      .sum();
}

/// Covariance coreset whose scaled row subset preserves ||A Y||_F^2 for every
/// orthonormal Y; the identity follows from the preserved Gram matrix.
template <class Scalar>
CovarianceCoreset<Scalar> svd_coreset(const Matrix<Scalar>& a, Index k) {
  return caratheodory_matrix(a, k);
}

/// Coreset for translated subspace queries: scaled rows of A recovered from a
/// covariance coreset of (A | 1), with weights from the appended-ones column.
template <class Scalar>
struct PcaCoreset {
  Matrix<Scalar> C;        // l x d, rows are recovered source rows
  Vector<Scalar> weights;  // l, positive

  Index size() const { return C.rows(); }
};

/// Builds the coreset of A for translated subspace queries. The appended-ones
/// column supplies the per-row divisor z = sqrt(n w); rows whose divisor falls
/// below 1e-12 of the largest are rejected and the construction is retried
/// with k grown by d+1.
template <class Scalar>
PcaCoreset<Scalar> pca_coreset(const Matrix<Scalar>& a, Index k) {
  const Index n = a.rows();
  const Index d = a.cols();
  if (n < 1 || d < 1) throw EmptyInput("pca_coreset: nonempty input required");
  const Index width = d + 1;
  if (k < width * width + 2) throw InvalidK("pca_coreset: k >= (d+1)^2 + 2 required");

  Matrix<Scalar> ones_appended(n, width);
  ones_appended.leftCols(d) = a;
  ones_appended.col(d).setOnes();

  for (int attempt = 0; attempt < 8; ++attempt, k += d + 1) {
    const CovarianceCoreset<Scalar> cm = caratheodory_matrix(ones_appended, k);
    const Vector<Scalar> z = cm.S.col(d);
    if (z.minCoeff() < Scalar(1e-12) * z.maxCoeff()) continue;
    PcaCoreset<Scalar> out;
    out.C.resize(cm.rows(), d);
    out.weights.resize(cm.rows());
    for (Index i = 0; i < cm.rows(); ++i) {
      out.C.row(i) = cm.S.row(i).head(d) / z(i);
      out.weights(i) = z(i) * z(i);
    }
    return out;
  }
  throw Error("pca_coreset: no well-conditioned row divisors after retries");
}

}  // namespace caracore
