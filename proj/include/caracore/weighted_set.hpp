#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "caracore/errors.hpp"
#include "caracore/matrix.hpp"

namespace caracore {

/// Ordered point set with one nonnegative weight per point. Points are rows.
template <class Scalar>
struct WeightedSet {
  Matrix<Scalar> points;   // n x d
  Vector<Scalar> weights;  // n

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }

  Scalar weight_sum() const { return weights.sum(); }

  void validate() const {
    if (points.rows() < 1 || points.cols() < 1)
      throw EmptyInput("WeightedSet: at least one point of dimension >= 1 required");
    if (points.rows() != weights.size())
      throw DimensionMismatch("WeightedSet: one weight per point required");
    if (!all_finite(points) || !all_finite(weights))
      throw NonFinite("WeightedSet: non-finite entries");
    if ((weights.array() < Scalar(0)).any())
      throw std::invalid_argument("WeightedSet: weights must be nonnegative");
  }

  /// Same set with weights scaled to sum to one.
  WeightedSet normalized() const {
    const Scalar sum = weight_sum();
    if (!(sum > Scalar(0)))
      throw std::invalid_argument("WeightedSet: cannot normalize zero total weight");
    return WeightedSet{points, weights / sum};
  }

  /// sum_i u_i p_i (weights are expected to sum to one).
  Vector<Scalar> weighted_mean() const { return points.transpose() * weights; }
};

/// Throws NotNormalized when the weights drift from sum one by more than 1e-8.
template <class Scalar>
void require_normalized(const Vector<Scalar>& weights, const char* who) {
  const double sum = weights.template cast<double>().sum();
  if (std::abs(sum - 1.0) > 1e-8)
    throw NotNormalized(std::string(who) + ": weights must sum to 1, got " +
                        std::to_string(sum));
}

/// Partition of [0, n) into contiguous clusters. The first n % k clusters
/// hold one extra element, so every cluster has at most ceil(n/k) members and
/// none is empty.
struct PartitionSpec {
  Index cluster_count = 0;
  std::vector<Index> boundaries;  // cluster i covers [boundaries[i], boundaries[i+1])

  Index cluster_begin(Index i) const { return boundaries[static_cast<size_t>(i)]; }
  Index cluster_end(Index i) const { return boundaries[static_cast<size_t>(i) + 1]; }
  Index cluster_size(Index i) const { return cluster_end(i) - cluster_begin(i); }

  Index cluster_of(Index point) const {
    auto it = std::upper_bound(boundaries.begin(), boundaries.end(), point);
    return static_cast<Index>(it - boundaries.begin()) - 1;
  }

  void validate() const {
    if (cluster_count < 1 || boundaries.size() != static_cast<size_t>(cluster_count) + 1)
      throw std::invalid_argument("PartitionSpec: inconsistent cluster count");
    const Index n = boundaries.back();
    const Index cap = (n + cluster_count - 1) / cluster_count;
    for (Index i = 0; i < cluster_count; ++i) {
      if (cluster_size(i) < 1 || cluster_size(i) > cap)
        throw std::invalid_argument("PartitionSpec: cluster size out of range");
    }
  }
};

inline PartitionSpec contiguous_partition(Index n, Index k) {
  if (n < 1 || k < 1 || k > n)
    throw std::invalid_argument("contiguous_partition: need 1 <= k <= n");
  PartitionSpec spec;
  spec.cluster_count = k;
  spec.boundaries.resize(static_cast<size_t>(k) + 1);
  const Index base = n / k;
  const Index extra = n % k;
  Index at = 0;
  for (Index i = 0; i < k; ++i) {
    spec.boundaries[static_cast<size_t>(i)] = at;
    at += base + (i < extra ? 1 : 0);
  }
  spec.boundaries[static_cast<size_t>(k)] = at;
  return spec;
}

}  // namespace caracore
