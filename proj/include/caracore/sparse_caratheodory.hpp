#pragma once

#include <utility>
#include <vector>

#include "caracore/caratheodory.hpp"
#include "caracore/errors.hpp"
#include "caracore/matrix.hpp"
#include "caracore/weighted_set.hpp"

namespace caracore {

/// One member of a sparse Caratheodory set: the restriction of a source point
/// to a single contiguous coordinate block (zero everywhere else).
template <class Scalar>
struct SparseElement {
  Index source_index = 0;
  Index block = 0;
  Vector<Scalar> values;  // the coordinates inside the block
  Scalar weight = 0;
};

template <class Scalar>
struct SparseCaratheodorySet {
  std::vector<SparseElement<Scalar>> elements;           // grouped by block, ascending
  std::vector<std::pair<Index, Index>> block_partition;  // [begin, end) per block
  Index dim = 0;
  Index source_size = 0;

  Index size() const { return static_cast<Index>(elements.size()); }

  /// Width of the widest block, ceil(dim / k2).
  Index block_width() const {
    Index w = 0;
    for (const auto& [b, e] : block_partition) w = std::max(w, e - b);
    return w;
  }

  Scalar weight_sum() const {
    Scalar s(0);
    for (const auto& el : elements) s += el.weight;
    return s;
  }

  /// The element as a dense vector: zero outside its block.
  Vector<Scalar> dense_vector(Index e) const {
    const auto& el = elements[static_cast<size_t>(e)];
    Vector<Scalar> v = Vector<Scalar>::Zero(dim);
    const auto [lo, hi] = block_partition[static_cast<size_t>(el.block)];
    v.segment(lo, hi - lo) = el.values;
    return v;
  }

  /// sum_c w(c) * c over all elements.
  Vector<Scalar> weighted_sum() const {
    Vector<Scalar> s = Vector<Scalar>::Zero(dim);
    for (const auto& el : elements) {
      const auto [lo, hi] = block_partition[static_cast<size_t>(el.block)];
      s.segment(lo, hi - lo) += el.weight * el.values;
    }
    return s;
  }
};

/// Contiguous partition of the coordinate indices [0, d) into k2 blocks; when
/// k2 does not divide d the leading blocks are one wider.
inline std::vector<std::pair<Index, Index>> block_partition(Index d, Index k2) {
  if (k2 < 1 || k2 > d)
    throw InvalidK("block_partition: 1 <= k2 <= d required");
  const PartitionSpec part = contiguous_partition(d, k2);
  std::vector<std::pair<Index, Index>> blocks;
  blocks.reserve(static_cast<size_t>(k2));
  for (Index i = 0; i < k2; ++i)
    blocks.emplace_back(part.cluster_begin(i), part.cluster_end(i));
  return blocks;
}

namespace detail {

// Shared core over an abstract block-restricted row source. BlockRowFn fills
// the restriction of source point `i` to block `b` into the provided buffer.
template <class Scalar, class BlockRowFn>
SparseCaratheodorySet<Scalar> sparse_caratheodory_rows(BlockRowFn&& row, Index n, Index dim,
                                                       const Vector<Scalar>& weights,
                                                       Index k1, Index k2) {
  const auto blocks = block_partition(dim, k2);
  Index widest = 0;
  for (const auto& [lo, hi] : blocks) widest = std::max(widest, hi - lo);
  if (k1 < widest + 2)
    throw InvalidK("sparse_caratheodory: k1 >= ceil(d/k2) + 2 required");

  SparseCaratheodorySet<Scalar> out;
  out.block_partition = blocks;
  out.dim = dim;
  out.source_size = n;

  for (Index b = 0; b < k2; ++b) {
    const auto [lo, hi] = blocks[static_cast<size_t>(b)];
    const Index width = hi - lo;
    CaratheodorySet<Scalar> reduced = fast_caratheodory_rows<Scalar>(
        [&row, b](Index i, Vector<Scalar>& buf) { row(b, i, buf); }, n, width, weights,
        k1);
    Vector<Scalar> buf(width);
    for (Index j = 0; j < reduced.size(); ++j) {
      SparseElement<Scalar> el;
      el.source_index = reduced.indices[static_cast<size_t>(j)];
      el.block = b;
      row(b, el.source_index, buf);
      el.values = buf;
      el.weight = reduced.weights(j);
      out.elements.push_back(std::move(el));
    }
  }
  return out;
}

}  // namespace detail

/// Blockwise Caratheodory reduction for high dimension: the coordinates are
/// split into k2 contiguous blocks, each block's restricted point set is
/// reduced with cluster count k1, and the selected restrictions are carried
/// with their weights unchanged. Total weight is therefore k2, and the set
/// holds at most k2 * (ceil(d/k2) + 1) vectors.
template <class Scalar>
SparseCaratheodorySet<Scalar> sparse_caratheodory(const WeightedSet<Scalar>& in, Index k1,
                                                  Index k2) {
  in.validate();
  require_normalized(in.weights, "sparse_caratheodory");
  if (k2 < 1 || k2 > in.dim())
    throw InvalidK("sparse_caratheodory: 1 <= k2 <= d required");
  const auto& pts = in.points;
  const auto blocks = block_partition(in.dim(), k2);
  return detail::sparse_caratheodory_rows<Scalar>(
      [&pts, &blocks](Index b, Index i, Vector<Scalar>& out) {
        const auto [lo, hi] = blocks[static_cast<size_t>(b)];
        out = pts.row(i).segment(lo, hi - lo).transpose();
      },
      in.size(), in.dim(), in.weights, k1, k2);
}

}  // namespace caracore
