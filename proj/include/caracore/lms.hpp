#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "caracore/covariance.hpp"
#include "caracore/errors.hpp"
#include "caracore/matrix.hpp"

namespace caracore {

/// Row ranges of an m-fold split of n rows; the first n % m folds get one
/// extra row.
inline std::vector<std::pair<Index, Index>> fold_ranges(Index n, Index m) {
  if (m < 1) throw std::invalid_argument("fold_ranges: m >= 1 required");
  if (m > n) throw FoldTooSmall("fold_ranges: more folds than rows");
  std::vector<std::pair<Index, Index>> ranges;
  ranges.reserve(static_cast<size_t>(m));
  const Index base = n / m;
  const Index extra = n % m;
  Index at = 0;
  for (Index i = 0; i < m; ++i) {
    const Index len = base + (i < extra ? 1 : 0);
    ranges.emplace_back(at, at + len);
    at += len;
  }
  return ranges;
}

enum class CoresetVariant {
  Exact,           // per-fold scaled row subsets, at most (d+1)^2 + 1 rows each
  SparsePlusPlus,  // per-fold reconstructed factors of exactly d+1 rows
};

/// Per-fold compressed regression pair. For every fold i and every x,
/// ||A_i x - b_i|| equals ||C_i x - y_i|| where (C_i, y_i) are the fold's rows
/// of (C, y); beta rescales the 1/(2n)-normalized objectives of lasso-style
/// solvers between the original and the compressed row counts.
template <class Scalar>
struct FoldedCoreset {
  Matrix<Scalar> C;
  Vector<Scalar> y;
  Index fold_count = 1;
  Index source_rows = 0;
  Scalar beta = 1;  // sqrt(rows(C) / n)
  CoresetVariant variant = CoresetVariant::Exact;
  std::vector<std::pair<Index, Index>> coreset_fold_rows;  // row ranges within C
  std::vector<std::pair<Index, Index>> source_fold_rows;   // row ranges within A

  Index rows() const { return C.rows(); }
};

namespace detail {

template <class Scalar>
Matrix<Scalar> fold_block(const Matrix<Scalar>& a, const Vector<Scalar>& b,
                          std::pair<Index, Index> range) {
  const Index len = range.second - range.first;
  Matrix<Scalar> ab(len, a.cols() + 1);
  ab.leftCols(a.cols()) = a.middleRows(range.first, len);
  ab.col(a.cols()) = b.segment(range.first, len);
  return ab;
}

template <class Scalar, class PerFold>
FoldedCoreset<Scalar> build_folded(const Matrix<Scalar>& a, const Vector<Scalar>& b,
                                   Index m, CoresetVariant variant, PerFold&& per_fold) {
  if (a.rows() != b.size())
    throw DimensionMismatch("lms_coreset: rows of A must match b");
  if (a.rows() < 1 || a.cols() < 1) throw EmptyInput("lms_coreset: nonempty input");

  FoldedCoreset<Scalar> out;
  out.fold_count = m;
  out.source_rows = a.rows();
  out.variant = variant;
  out.source_fold_rows = fold_ranges(a.rows(), m);

  std::vector<Matrix<Scalar>> pieces;
  pieces.reserve(static_cast<size_t>(m));
  Index total = 0;
  for (const auto& range : out.source_fold_rows) {
    Matrix<Scalar> s = per_fold(fold_block(a, b, range));
    out.coreset_fold_rows.emplace_back(total, total + s.rows());
    total += s.rows();
    pieces.push_back(std::move(s));
  }

  out.C.resize(total, a.cols());
  out.y.resize(total);
  for (Index i = 0; i < m; ++i) {
    const auto [lo, hi] = out.coreset_fold_rows[static_cast<size_t>(i)];
    const auto& s = pieces[static_cast<size_t>(i)];
    out.C.middleRows(lo, hi - lo) = s.leftCols(a.cols());
    out.y.segment(lo, hi - lo) = s.col(a.cols());
  }
  out.beta = std::sqrt(static_cast<Scalar>(total) / static_cast<Scalar>(a.rows()));
  return out;
}

}  // namespace detail

/// Fold-aware exact LMS coreset: each fold of (A | b) is compressed to a
/// scaled row subset with the fold's Gram matrix preserved, and the per-fold
/// subsets are stacked. Requires k >= (d+1)^2 + 2.
template <class Scalar>
FoldedCoreset<Scalar> lms_coreset(const Matrix<Scalar>& a, const Vector<Scalar>& b, Index m,
                                  Index k) {
  const Index width = a.cols() + 1;
  if (k < width * width + 2) throw InvalidK("lms_coreset: k >= (d+1)^2 + 2 required");
  return detail::build_folded(a, b, m, CoresetVariant::Exact,
                              [k](const Matrix<Scalar>& ab) {
                                return caratheodory_matrix(ab, k).S;
                              });
}

/// Fold-aware sparse LMS coreset: each fold is compressed to a reconstructed
/// factor of exactly d+1 rows, so C has m(d+1) rows in total.
template <class Scalar>
FoldedCoreset<Scalar> lms_coreset_pp(const Matrix<Scalar>& a, const Vector<Scalar>& b,
                                     Index m, Index k1, Index k2) {
  const Index width = a.cols() + 1;
  if (k2 < 1 || k2 > width * width)
    throw InvalidK("lms_coreset_pp: 1 <= k2 <= (d+1)^2 required");
  const Index dprime = (width * width + k2 - 1) / k2;
  if (k1 < dprime + 2)
    throw InvalidK("lms_coreset_pp: k1 >= ceil((d+1)^2 / k2) + 2 required");
  return detail::build_folded(a, b, m, CoresetVariant::SparsePlusPlus,
                              [k1, k2](const Matrix<Scalar>& ab) {
                                return sparse_caratheodory_matrix(ab, k1, k2).S;
                              });
}

}  // namespace caracore
