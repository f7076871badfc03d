#include "caracore/sparse_caratheodory.hpp"

#include <gtest/gtest.h>

#include <random>

#include "caracore/datasets.hpp"
#include "caracore/verify.hpp"

using namespace caracore;
using verify_detail::random_weighted_set;

TEST(BlockPartition, EvenSplit) {
  const auto blocks = block_partition(4, 2);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0], (std::pair<Index, Index>{0, 2}));
  EXPECT_EQ(blocks[1], (std::pair<Index, Index>{2, 4}));
}

TEST(BlockPartition, CeilingSplit) {
  const auto blocks = block_partition(5, 2);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0], (std::pair<Index, Index>{0, 3}));
  EXPECT_EQ(blocks[1], (std::pair<Index, Index>{3, 5}));
}

TEST(BlockPartition, Singletons) {
  const auto blocks = block_partition(3, 3);
  ASSERT_EQ(blocks.size(), 3u);
  for (Index i = 0; i < 3; ++i)
    EXPECT_EQ(blocks[static_cast<size_t>(i)], (std::pair<Index, Index>{i, i + 1}));
}

TEST(BlockPartition, RangeViolations) {
  EXPECT_THROW(block_partition(4, 0), InvalidK);
  EXPECT_THROW(block_partition(4, 5), InvalidK);
}

namespace {

// Definition-style checks shared by the tests below.
void expect_sparse_valid(const SparseCaratheodorySet<double>& out,
                         const WeightedSet<double>& in, double tol = 1e-9) {
  const Index k2 = static_cast<Index>(out.block_partition.size());
  const Index dprime = out.block_width();
  EXPECT_LE(out.size(), k2 * (dprime + 1));
  EXPECT_NEAR(out.weight_sum(), static_cast<double>(k2), 1e-9);

  for (Index e = 0; e < out.size(); ++e) {
    const auto& el = out.elements[static_cast<size_t>(e)];
    EXPECT_GT(el.weight, 0.0);
    const auto [lo, hi] = out.block_partition[static_cast<size_t>(el.block)];
    // the element equals the source point on its block, zero elsewhere
    const VectorD dense = out.dense_vector(e);
    for (Index c = 0; c < in.dim(); ++c) {
      if (c >= lo && c < hi)
        EXPECT_EQ(dense(c), in.points(el.source_index, c));
      else
        EXPECT_EQ(dense(c), 0.0);
    }
  }

  const VectorD mean = in.points.transpose() * in.weights;
  const VectorD got = out.weighted_sum();
  EXPECT_LE((got - mean).cwiseAbs().maxCoeff(), tol * (1.0 + mean.norm()));
}

}  // namespace

TEST(SparseCaratheodory, SingleBlockDegeneratesToPlainSet) {
  std::mt19937_64 rng(3);
  const auto set = random_weighted_set<double>(rng, 300, 4, 1.0, false);
  const auto out = sparse_caratheodory(set, 2 * 4 + 2, 1);
  EXPECT_LE(out.size(), 5);  // d + 1
  EXPECT_NEAR(out.weight_sum(), 1.0, 1e-10);
  expect_sparse_valid(out, set);
}

TEST(SparseCaratheodory, TwoBlocksOfFour) {
  std::mt19937_64 rng(5);
  const auto set = random_weighted_set<double>(rng, 500, 4, 1.0, false);
  const auto out = sparse_caratheodory(set, 2 * 2 + 2, 2);
  EXPECT_LE(out.size(), 6);  // 2 * (2 + 1)
  EXPECT_NEAR(out.weight_sum(), 2.0, 1e-9);
  expect_sparse_valid(out, set);
}

TEST(SparseCaratheodory, MaxBlocksScalarCoordinates) {
  std::mt19937_64 rng(7);
  const Index d = 6;
  const auto set = random_weighted_set<double>(rng, 400, d, 1.0, false);
  const auto out = sparse_caratheodory(set, 4, d);  // per-block dimension 1
  EXPECT_LE(out.size(), 2 * d);
  for (const auto& el : out.elements) EXPECT_EQ(el.values.size(), 1);
  expect_sparse_valid(out, set);
}

TEST(SparseCaratheodory, RangeViolations) {
  std::mt19937_64 rng(9);
  const auto set = random_weighted_set<double>(rng, 100, 4, 1.0, false);
  EXPECT_THROW(sparse_caratheodory(set, 6, 0), InvalidK);
  EXPECT_THROW(sparse_caratheodory(set, 6, 5), InvalidK);
  EXPECT_THROW(sparse_caratheodory(set, 3, 2), InvalidK);  // k1 < d' + 2 = 4

  MatrixD pts(3, 2);
  pts.setRandom();
  VectorD w = VectorD::Constant(3, 0.5);
  EXPECT_THROW(sparse_caratheodory(WeightedSet<double>{pts, w}, 4, 1), NotNormalized);
}

TEST(SparseCaratheodory, FuzzInvariants) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 25; ++t) {
    const Index d = 2 + static_cast<Index>(uniform01(rng) * 98);
    const double u = uniform01(rng);
    const Index n = 10 + static_cast<Index>(u * u * 9990);
    const auto set = random_weighted_set<double>(rng, n, d, t % 2 ? 10.0 : 1.0, false);
    const Index k2 = 1 + static_cast<Index>(uniform01(rng) * (d - 1));
    const Index dprime = (d + k2 - 1) / k2;
    const auto out = sparse_caratheodory(set, dprime + 2, k2);
    expect_sparse_valid(out, set);
  }
}

TEST(SparseCaratheodory, Deterministic) {
  std::mt19937_64 rng(17);
  const auto set = random_weighted_set<double>(rng, 600, 10, 1.0, false);
  const auto a = sparse_caratheodory(set, 7, 3);
  const auto b = sparse_caratheodory(set, 7, 3);
  ASSERT_EQ(a.size(), b.size());
  for (Index e = 0; e < a.size(); ++e) {
    EXPECT_EQ(a.elements[static_cast<size_t>(e)].source_index,
              b.elements[static_cast<size_t>(e)].source_index);
    EXPECT_EQ(a.elements[static_cast<size_t>(e)].weight,
              b.elements[static_cast<size_t>(e)].weight);
  }
}
