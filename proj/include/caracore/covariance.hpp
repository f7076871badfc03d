#pragma once

#include <utility>
#include <vector>

#include "caracore/caratheodory.hpp"
#include "caracore/errors.hpp"
#include "caracore/linalg.hpp"
#include "caracore/matrix.hpp"
#include "caracore/sparse_caratheodory.hpp"

namespace caracore {

enum class CoresetKind {
  RowSubset,      // rows are scaled input rows, at most d^2 + 1 of them
  Reconstructed,  // d x d factor recovered from the preserved Gram matrix
};

/// Compact matrix S with S^T S equal to the input's Gram matrix A^T A.
template <class Scalar>
struct CovarianceCoreset {
  Matrix<Scalar> S;
  CoresetKind kind = CoresetKind::RowSubset;

  // RowSubset provenance: S.row(i) == row_scales(i) * A.row(row_indices[i]).
  std::vector<Index> row_indices;
  Vector<Scalar> row_scales;

  // Reconstructed only: the recovered Gram drifted from symmetry by more than
  // 1e-8 relative, or a significant singular direction had a negative
  // eigenvalue sign. Recorded, never fatal.
  bool negative_eigenvalue_warning = false;

  Index rows() const { return S.rows(); }
};

namespace detail {

// Column-stacked flat position of entry (r, c) of a d x d matrix.
inline Index stacked_index(Index r, Index c, Index d) { return c * d + r; }

// Entries [lo, hi) of the column-stacked outer product a a^T.
template <class Scalar, class ARow>
void stacked_outer_segment(const ARow& a, Index d, Index lo, Index hi, Vector<Scalar>& out) {
  for (Index f = lo; f < hi; ++f) out(f - lo) = a(f % d) * a(f / d);
}

}  // namespace detail

/// Column-stacks a square matrix into a vector (column by column).
template <class Scalar>
Vector<Scalar> column_stack(const Matrix<Scalar>& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("column_stack: square input required");
  return Eigen::Map<const Vector<Scalar>>(m.data(), m.size());
}

/// Inverse of column_stack.
template <class Scalar>
Matrix<Scalar> reshape_stacked(const Vector<Scalar>& v, Index d) {
  if (v.size() != d * d) throw DimensionMismatch("reshape_stacked: size must be d^2");
  return Eigen::Map<const Matrix<Scalar>>(v.data(), d, d);
}

/// Scaled-row-subset covariance coreset: reduces the flattened outer products
/// of the rows of A (uniform weight 1/n) and scales the selected rows by
/// sqrt(n w). At most d^2 + 1 rows survive and S^T S = A^T A.
template <class Scalar>
CovarianceCoreset<Scalar> caratheodory_matrix(const Matrix<Scalar>& a, Index k) {
  const Index n = a.rows();
  const Index d = a.cols();
  if (n < 1 || d < 1) throw EmptyInput("caratheodory_matrix: nonempty input required");
  if (!all_finite(a)) throw NonFinite("caratheodory_matrix: non-finite input");
  if (k < d * d + 2) throw InvalidK("caratheodory_matrix: k >= d^2 + 2 required");

  const Vector<Scalar> weights =
      Vector<Scalar>::Constant(n, Scalar(1) / static_cast<Scalar>(n));
  CaratheodorySet<Scalar> set = detail::fast_caratheodory_rows<Scalar>(
      [&a, d](Index i, Vector<Scalar>& out) {
        detail::stacked_outer_segment<Scalar>(a.row(i), d, 0, d * d, out);
      },
      n, d * d, weights, k);

  CovarianceCoreset<Scalar> out;
  out.kind = CoresetKind::RowSubset;
  out.row_indices = set.indices;
  out.row_scales = (static_cast<Scalar>(n) * set.weights.array()).sqrt();
  out.S.resize(set.size(), d);
  for (Index r = 0; r < set.size(); ++r)
    out.S.row(r) = out.row_scales(r) * a.row(set.indices[static_cast<size_t>(r)]);
  return out;
}

/// d-row covariance coreset: reduces the flattened outer products blockwise,
/// recovers the Gram matrix from the weighted sum, and factors it through a
/// thin SVD as S = sqrt(D) V^T. The recovered matrix is symmetrized before
/// factoring; tiny negative singular values are clamped to zero.
template <class Scalar>
CovarianceCoreset<Scalar> sparse_caratheodory_matrix(const Matrix<Scalar>& a, Index k1,
                                                     Index k2) {
  const Index n = a.rows();
  const Index d = a.cols();
  if (n < 1 || d < 1)
    throw EmptyInput("sparse_caratheodory_matrix: nonempty input required");
  if (!all_finite(a)) throw NonFinite("sparse_caratheodory_matrix: non-finite input");
  const Index dd = d * d;
  if (k2 < 1 || k2 > dd)
    throw InvalidK("sparse_caratheodory_matrix: 1 <= k2 <= d^2 required");

  const auto blocks = block_partition(dd, k2);
  const Vector<Scalar> weights =
      Vector<Scalar>::Constant(n, Scalar(1) / static_cast<Scalar>(n));
  SparseCaratheodorySet<Scalar> cset = detail::sparse_caratheodory_rows<Scalar>(
      [&a, d, &blocks](Index b, Index i, Vector<Scalar>& out) {
        const auto [lo, hi] = blocks[static_cast<size_t>(b)];
        detail::stacked_outer_segment<Scalar>(a.row(i), d, lo, hi, out);
      },
      n, dd, weights, k1, k2);

  Vector<Scalar> stacked = cset.weighted_sum();
  stacked *= static_cast<Scalar>(n);
  const Matrix<Scalar> gram = reshape_stacked(stacked, d);

  CovarianceCoreset<Scalar> out;
  out.kind = CoresetKind::Reconstructed;
  const double rel_asym = relative_frobenius_error(gram, gram.transpose());
  const Matrix<Scalar> sym = (gram + gram.transpose()) / Scalar(2);
  const ThinSvd<Scalar> svd = thin_svd(sym);

  bool sign_flip = false;
  if (svd.singular_values.size() > 0) {
    const Scalar cut = svd.singular_values(0) * Scalar(1e-8);
    for (Index i = 0; i < svd.singular_values.size(); ++i)
      if (svd.singular_values(i) > cut && svd.u.col(i).dot(svd.v.col(i)) < Scalar(0))
        sign_flip = true;
  }
  out.negative_eigenvalue_warning = rel_asym > 1e-8 || sign_flip;

  out.S = svd.singular_values.cwiseMax(Scalar(0)).cwiseSqrt().asDiagonal() *
          svd.v.transpose();
  return out;
}

}  // namespace caracore
