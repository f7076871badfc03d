#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "caracore/errors.hpp"
#include "caracore/linalg.hpp"
#include "caracore/matrix.hpp"
#include "caracore/weighted_set.hpp"

namespace caracore {

/// Weighted subset of an input set whose weighted mean equals the input's
/// weighted mean, with at most dim+1 members and weights summing to one.
template <class Scalar>
struct CaratheodorySet {
  std::vector<Index> indices;  // positions in the source set, strictly increasing
  Vector<Scalar> weights;      // aligned with indices, all positive
  Index source_size = 0;
  Index source_dim = 0;

  Index size() const { return static_cast<Index>(indices.size()); }
};

/// Cost model of the reduction used on the cluster representatives.
enum class SlowVariant { Quadratic, Linear };

/// Cluster count minimizing construction cost under the given cost model,
/// clamped to the smallest usable value d+2. The Linear entry is exposed for
/// forward compatibility; the implemented reduction is the quadratic one.
inline Index default_cluster_count(Index d, SlowVariant variant) {
  if (d < 1) throw std::invalid_argument("default_cluster_count: d >= 1 required");
  const double e = std::exp(1.0);
  const double factor = variant == SlowVariant::Quadratic ? std::sqrt(e) : e;
  const auto k = static_cast<Index>(std::ceil(factor * static_cast<double>(d)));
  return std::max(k, d + 2);
}

namespace detail {

// Weights at or below this fraction of the largest input weight are treated
// as zero when points are discarded: the alpha subtraction only zeroes the
// eliminated weight up to rounding.
constexpr double kWeightFloorScale = 1e-14;

// Entries of a dependence vector below this fraction of its largest entry do
// not count as positive when alpha is formed.
constexpr double kDependenceEntryCut = 1e-12;

// Affine-dependence basis of a point set (one point per column): every basis
// column b satisfies sum_i b_i p_i = 0 and sum_i b_i = 0. Built from the
// kernel of the difference matrix [p_i - p_0], which the SVD exposes as the
// right singular vectors past the numerical rank.
template <class Scalar>
Matrix<Scalar> affine_dependence_basis(const Matrix<Scalar>& pts) {
  const Index dim = pts.rows();
  const Index m = pts.cols();
  Matrix<Scalar> diffs = pts.rightCols(m - 1).colwise() - pts.col(0);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(diffs, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Scalar cut = sv.size() > 0
                         ? sv(0) * static_cast<Scalar>(std::max(dim, m - 1)) *
                               std::numeric_limits<Scalar>::epsilon()
                         : Scalar(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  const Index kernel_dim = (m - 1) - rank;
  Matrix<Scalar> basis = Matrix<Scalar>::Zero(m, kernel_dim);
  basis.bottomRows(m - 1) = svd.matrixV().rightCols(kernel_dim);
  basis.row(0) = -basis.bottomRows(m - 1).colwise().sum();
  return basis;
}

// Caratheodory reduction: shrinks a weighted point list (one point per
// column, all weights positive) to at most dim+1 members while preserving the
// weighted sum and the total weight. Each round subtracts alpha times an
// affine dependence from the weights, where alpha = min{u_i / v_i : v_i > 0}
// (ties to the lowest index), so at least one weight reaches zero per round.
//
// Rather than recomputing a nullspace per round, a whole dependence basis is
// extracted once and coordinates of discarded points are then eliminated from
// it by pivoted column combinations; the basis is rebuilt from the surviving
// points only if it runs out early. Returns the kept positions (into the
// original column order) and their weights.
template <class Scalar>
std::pair<std::vector<Index>, Vector<Scalar>> reduce_to_caratheodory(Matrix<Scalar> pts,
                                                                     Vector<Scalar> u) {
  const Index dim = pts.rows();
  std::vector<Index> pos(static_cast<size_t>(pts.cols()));
  std::iota(pos.begin(), pos.end(), Index{0});
  const Scalar floor = static_cast<Scalar>(kWeightFloorScale) * u.maxCoeff();

  Matrix<Scalar> basis;
  auto live = [&] { return static_cast<Index>(pos.size()); };

  auto drop_basis_column = [&](Index c) {
    const Index last = basis.cols() - 1;
    if (c != last) basis.col(c) = basis.col(last);
    basis.conservativeResize(Eigen::NoChange, last);
  };

  // Removes point coordinate i from every basis column by combining with the
  // column carrying the largest entry at i, which is then dropped.
  auto eliminate_coordinate = [&](Index i) {
    if (basis.cols() == 0) return;
    Index piv = 0;
    basis.row(i).cwiseAbs().maxCoeff(&piv);
    const Scalar pivot = basis(i, piv);
    if (std::abs(pivot) <= Scalar(1e-13)) {
      basis.row(i).setZero();  // coordinate already absent up to noise
      return;
    }
    Vector<Scalar> pivcol = basis.col(piv);
    for (Index j = 0; j < basis.cols(); ++j) {
      if (j == piv) continue;
      basis.col(j) -= (basis(i, j) / pivot) * pivcol;
      const Scalar mx = basis.col(j).cwiseAbs().maxCoeff();
      if (mx > Scalar(0)) basis.col(j) /= mx;
      basis(i, j) = Scalar(0);
    }
    drop_basis_column(piv);
  };

  while (live() > dim + 1) {
    if (basis.cols() == 0) {
      basis = affine_dependence_basis(pts);
      if (basis.cols() == 0)
        throw DegenerateNullspace("caratheodory: no dependence among excess points");
    }

    while (basis.cols() > 0 && live() > dim + 1) {
      Vector<Scalar> v = basis.col(0);
      const Scalar vmax = v.cwiseAbs().maxCoeff();
      if (!(vmax > Scalar(0)) || !all_finite(v)) {
        drop_basis_column(0);
        continue;
      }
      v /= vmax;

      // The dependence sums to zero, so entries of both signs exist; flip the
      // sign if no usable positive entry is found the first time.
      const Scalar entry_cut = static_cast<Scalar>(kDependenceEntryCut);
      Index istar = -1;
      Scalar alpha(0);
      for (int attempt = 0; attempt < 2 && istar < 0; ++attempt) {
        if (attempt == 1) v = -v;
        for (Index i = 0; i < live(); ++i) {
          if (v(i) > entry_cut) {
            const Scalar ratio = u(i) / v(i);
            if (istar < 0 || ratio < alpha) {
              istar = i;
              alpha = ratio;
            }
          }
        }
      }
      if (istar < 0) {  // pure-noise column
        drop_basis_column(0);
        continue;
      }

      u -= alpha * v;
      u(istar) = Scalar(0);

      std::vector<Index> drops;
      for (Index i = 0; i < live(); ++i)
        if (u(i) <= floor) drops.push_back(i);

      for (Index i : drops) eliminate_coordinate(i);

      // Compact points, weights, positions and basis rows.
      const Index kept = live() - static_cast<Index>(drops.size());
      Matrix<Scalar> new_pts(dim, kept);
      Vector<Scalar> new_u(kept);
      Matrix<Scalar> new_basis(kept, basis.cols());
      std::vector<Index> new_pos;
      new_pos.reserve(static_cast<size_t>(kept));
      Index at = 0;
      size_t next_drop = 0;
      for (Index i = 0; i < live(); ++i) {
        if (next_drop < drops.size() && drops[next_drop] == i) {
          ++next_drop;
          continue;
        }
        new_pts.col(at) = pts.col(i);
        new_u(at) = u(i);
        new_basis.row(at) = basis.row(i);
        new_pos.push_back(pos[static_cast<size_t>(i)]);
        ++at;
      }
      pts = std::move(new_pts);
      u = std::move(new_u);
      basis = std::move(new_basis);
      pos = std::move(new_pos);
    }
  }
  return {std::move(pos), std::move(u)};
}

// Recursive cluster-and-reduce construction over an abstract row source, so
// callers can feed derived points (e.g. flattened outer products) without
// materializing them. RowFn fills the point with the given source index into
// the provided buffer.
template <class Scalar, class RowFn>
CaratheodorySet<Scalar> fast_caratheodory_rows(RowFn&& row, Index n, Index dim,
                                               const Vector<Scalar>& weights, Index k) {
  std::vector<Index> active;
  std::vector<Scalar> w;
  active.reserve(static_cast<size_t>(n));
  w.reserve(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (weights(i) != Scalar(0)) {
      active.push_back(i);
      w.push_back(weights(i));
    }
  }

  Vector<Scalar> buf(dim);
  while (static_cast<Index>(active.size()) > dim + 1) {
    const auto live = static_cast<Index>(active.size());
    const Index clusters = std::min(k, live);
    const PartitionSpec part = contiguous_partition(live, clusters);

    Matrix<Scalar> means = Matrix<Scalar>::Zero(dim, clusters);
    Vector<Scalar> cluster_weight = Vector<Scalar>::Zero(clusters);
    for (Index c = 0; c < clusters; ++c) {
      for (Index t = part.cluster_begin(c); t < part.cluster_end(c); ++t) {
        row(active[static_cast<size_t>(t)], buf);
        means.col(c) += w[static_cast<size_t>(t)] * buf;
        cluster_weight(c) += w[static_cast<size_t>(t)];
      }
      means.col(c) /= cluster_weight(c);
    }

    auto [chosen, chosen_weight] =
        reduce_to_caratheodory<Scalar>(std::move(means), cluster_weight);

    std::vector<Index> next;
    std::vector<Scalar> next_w;
    for (size_t j = 0; j < chosen.size(); ++j) {
      const Index c = chosen[j];
      const Scalar scale = chosen_weight(static_cast<Index>(j)) / cluster_weight(c);
      for (Index t = part.cluster_begin(c); t < part.cluster_end(c); ++t) {
        next.push_back(active[static_cast<size_t>(t)]);
        next_w.push_back(scale * w[static_cast<size_t>(t)]);
      }
    }
    active = std::move(next);
    w = std::move(next_w);
  }

  CaratheodorySet<Scalar> out;
  out.indices = std::move(active);
  out.weights = Eigen::Map<const Vector<Scalar>>(w.data(), static_cast<Index>(w.size()));
  out.source_size = n;
  out.source_dim = dim;
  return out;
}

}  // namespace detail

/// Classical Caratheodory reduction. Weights must be positive and sum to one;
/// inputs with at most d+1 points are returned unchanged.
template <class Scalar>
CaratheodorySet<Scalar> caratheodory_slow(const WeightedSet<Scalar>& in) {
  in.validate();
  require_normalized(in.weights, "caratheodory_slow");
  if ((in.weights.array() <= Scalar(0)).any())
    throw std::invalid_argument("caratheodory_slow: weights must be positive");

  const Index n = in.size();
  const Index d = in.dim();
  CaratheodorySet<Scalar> out;
  out.source_size = n;
  out.source_dim = d;
  if (n <= d + 1) {
    out.indices.resize(static_cast<size_t>(n));
    std::iota(out.indices.begin(), out.indices.end(), Index{0});
    out.weights = in.weights;
    return out;
  }
  auto [pos, w] = detail::reduce_to_caratheodory<Scalar>(in.points.transpose(), in.weights);
  out.indices = std::move(pos);
  out.weights = std::move(w);
  return out;
}

/// Cluster-accelerated Caratheodory reduction: partitions the points into k
/// contiguous clusters, reduces the cluster means, keeps the members of the
/// chosen clusters with proportionally redistributed weights, and repeats
/// until at most d+1 points remain. Zero-weight points are discarded first;
/// k is clamped to the live point count at deeper levels.
template <class Scalar>
CaratheodorySet<Scalar> fast_caratheodory(const WeightedSet<Scalar>& in, Index k) {
  in.validate();
  require_normalized(in.weights, "fast_caratheodory");
  if (k < in.dim() + 2)
    throw InvalidK("fast_caratheodory: k >= d + 2 required");
  const auto& pts = in.points;
  return detail::fast_caratheodory_rows<Scalar>(
      [&pts](Index i, Vector<Scalar>& out) { out = pts.row(i).transpose(); }, in.size(),
      in.dim(), in.weights, k);
}

}  // namespace caracore
