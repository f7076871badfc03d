#include "caracore/pca.hpp"

#include <gtest/gtest.h>

#include <random>

#include "caracore/datasets.hpp"
#include "caracore/verify.hpp"

using namespace caracore;
using verify_detail::normal01;
using verify_detail::random_matrix;

namespace {

SubspaceQuery<double> random_query(std::mt19937_64& rng, Index d, Index j,
                                   double ell_scale) {
  MatrixD raw(d, d - j);
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < d - j; ++c) raw(r, c) = normal01(rng);
  SubspaceQuery<double> q;
  q.Y = orthonormalize(raw);
  q.j = j;
  q.ell = VectorD::Zero(d);
  for (Index r = 0; r < d; ++r) q.ell(r) = ell_scale * normal01(rng);
  q.validate();
  return q;
}

}  // namespace

TEST(SubspaceQuery, ValidatesShapeAndOrthonormality) {
  SubspaceQuery<double> q;
  q.Y = MatrixD::Identity(4, 2);
  q.j = 2;
  q.ell = VectorD::Zero(4);
  EXPECT_NO_THROW(q.validate());

  q.Y(0, 0) = 2.0;
  EXPECT_THROW(q.validate(), std::invalid_argument);
  q.Y = MatrixD::Identity(4, 3);
  EXPECT_THROW(q.validate(), DimensionMismatch);  // cols != d - j
  q.Y = MatrixD::Identity(4, 2);
  q.ell = VectorD::Zero(3);
  EXPECT_THROW(q.validate(), DimensionMismatch);
}

TEST(SvdCoreset, SingleUnitVectorQuadraticForm) {
  std::mt19937_64 rng(3);
  const Index d = 5;
  const MatrixD a = random_matrix(rng, 800, d, 0.0, 10.0);
  const auto cs = svd_coreset(a, 2 * d * d + 2);
  SubspaceQuery<double> q = random_query(rng, d, d - 1, 0.0);  // single column
  q.ell.setZero();
  EXPECT_LE(std::abs(subspace_energy(a, q) - subspace_energy(cs.S, q)),
            1e-9 * (1.0 + subspace_energy(a, q)));
}

TEST(SvdCoreset, TwentyRandomQueries) {
  std::mt19937_64 rng(5);
  const Index d = 5;
  const MatrixD a = random_matrix(rng, 1000, d, 0.0, 10.0);
  const auto cs = svd_coreset(a, 2 * d * d + 2);
  for (int t = 0; t < 20; ++t) {
    const Index j = 1 + static_cast<Index>(uniform01(rng) * (d - 1));
    SubspaceQuery<double> q = random_query(rng, d, j, 0.0);
    q.ell.setZero();
    const double full = subspace_energy(a, q);
    const double reduced = subspace_energy(cs.S, q);
    EXPECT_LE(std::abs(full - reduced), 1e-9 * (1.0 + full)) << "query " << t;
  }
}

TEST(SvdCoreset, ZeroMatrix) {
  const MatrixD a = MatrixD::Zero(100, 3);
  const auto cs = svd_coreset(a, 2 * 9 + 2);
  SubspaceQuery<double> q;
  q.Y = MatrixD::Identity(3, 2);
  q.j = 1;
  q.ell = VectorD::Zero(3);
  EXPECT_EQ(subspace_energy(a, q), 0.0);
  EXPECT_EQ(subspace_energy(cs.S, q), 0.0);
}

TEST(PcaCoreset, TranslationFreeCaseMatchesSvdIdentity) {
  std::mt19937_64 rng(7);
  const Index d = 4;
  const MatrixD a = random_matrix(rng, 500, d, -5.0, 5.0);
  const auto coreset = pca_coreset(a, 2 * (d + 1) * (d + 1) + 2);
  for (int t = 0; t < 5; ++t) {
    const Index j = 1 + static_cast<Index>(uniform01(rng) * (d - 1));
    SubspaceQuery<double> q = random_query(rng, d, j, 0.0);
    q.ell.setZero();
    const double full = subspace_energy(a, q);
    const double weighted = weighted_subspace_energy(coreset.C, coreset.weights, q);
    EXPECT_LE(std::abs(full - weighted), 1e-9 * (1.0 + full));
  }
}

TEST(PcaCoreset, TranslatedQueries) {
  std::mt19937_64 rng(9);
  const Index d = 4;
  const MatrixD a = random_matrix(rng, 500, d, -5.0, 5.0);
  const auto coreset = pca_coreset(a, 2 * (d + 1) * (d + 1) + 2);
  EXPECT_LE(coreset.size(), (d + 1) * (d + 1) + 1);
  EXPECT_GT(coreset.weights.minCoeff(), 0.0);
  for (int t = 0; t < 10; ++t) {
    const Index j = 1 + static_cast<Index>(uniform01(rng) * (d - 1));
    const SubspaceQuery<double> q = random_query(rng, d, j, 10.0);
    const double full = subspace_energy(a, q);
    const double weighted = weighted_subspace_energy(coreset.C, coreset.weights, q);
    EXPECT_LE(std::abs(full - weighted), 1e-9 * (1.0 + full)) << "query " << t;
  }
}

TEST(PcaCoreset, StressTranslationsFarFromData) {
  std::mt19937_64 rng(11);
  const Index d = 3;
  const MatrixD a = random_matrix(rng, 300, d, 0.0, 1.0);
  const auto coreset = pca_coreset(a, 2 * 16 + 2);
  for (int t = 0; t < 10; ++t) {
    const SubspaceQuery<double> q = random_query(rng, d, 1, 100.0);
    const double full = subspace_energy(a, q);
    const double weighted = weighted_subspace_energy(coreset.C, coreset.weights, q);
    EXPECT_LE(std::abs(full - weighted), 1e-9 * (1.0 + full));
  }
}

TEST(PcaCoreset, InvalidK) {
  std::mt19937_64 rng(13);
  const MatrixD a = random_matrix(rng, 100, 3, 0.0, 1.0);
  EXPECT_THROW(pca_coreset(a, 17), InvalidK);  // needs (d+1)^2 + 2 = 18
  EXPECT_NO_THROW(pca_coreset(a, 18));
}
