#include "caracore/sketches.hpp"

#include <gtest/gtest.h>

#include <iostream>
#include <random>

#include "caracore/datasets.hpp"
#include "caracore/lms.hpp"
#include "caracore/solvers.hpp"
#include "caracore/verify.hpp"

using namespace caracore;
using verify_detail::random_matrix;

TEST(AccumulateGram, MatchesDirectProductAndIsSymmetric) {
  std::mt19937_64 rng(3);
  const MatrixD a = random_matrix(rng, 200, 4, 0.0, 10.0);
  const VectorD b = random_matrix(rng, 200, 1, 0.0, 10.0).col(0);
  const MatrixD g = accumulate_gram(a, b);
  MatrixD ab(200, 5);
  ab << a, b;
  EXPECT_LE(relative_frobenius_error(g, MatrixD(ab.transpose() * ab)), 1e-13);
  EXPECT_TRUE(g == g.transpose());  // bitwise by construction
}

TEST(AccumulateGram, BitwiseReproducible) {
  std::mt19937_64 rng(5);
  const MatrixF a = random_matrix(rng, 500, 3, 0.0, 1000.0).cast<float>();
  const VectorF b = random_matrix(rng, 500, 1, 0.0, 1000.0).col(0).cast<float>();
  const MatrixF g1 = accumulate_gram(a, b);
  const MatrixF g2 = accumulate_gram(a, b);
  EXPECT_TRUE(g1 == g2);
}

TEST(SketchCholesky, OrthonormalColumnsSucceed) {
  const Index n = 40, d = 3;
  MatrixD a = MatrixD::Zero(n, d);
  VectorD b(n);
  for (Index i = 0; i < n; ++i) {
    a(i, i % d) = 1.0;  // columns orthogonal
    b(i) = static_cast<double>(i % 7) + 0.5;
  }
  const auto l = sketch_cholesky(a, b);
  ASSERT_TRUE(l.has_value());
  const MatrixD gram = accumulate_gram(a, b);
  EXPECT_LE((MatrixD(*l * l->transpose()) - gram).norm(), 1e-10 * gram.norm());
}

TEST(SketchCholesky, SingleRowGramIsSingular) {
  MatrixD a(1, 2);
  a << 1, 2;
  VectorD b(1);
  b << 3;
  EXPECT_FALSE(sketch_cholesky(a, b).has_value());
}

TEST(SketchCholesky, Float32LargeMagnitudeFailuresRecorded) {
  // Empirical reproduction of the low-precision failure mode: counts are
  // reported, not asserted, since they depend on the draw.
  std::mt19937_64 rng(7);
  int failures = 0;
  const int trials = 10;
  for (int t = 0; t < trials; ++t) {
    const MatrixF a = random_matrix(rng, 100000, 5, 0.0, 1000.0).cast<float>();
    const VectorF b = random_matrix(rng, 100000, 1, 0.0, 1000.0).col(0).cast<float>();
    if (!sketch_cholesky(a, b).has_value()) ++failures;
  }
  std::cout << "[ sketch-cholesky f32 failures: " << failures << "/" << trials << " ]\n";
  SUCCEED();
}

TEST(SketchCholesky, Float32CollinearColumnsFailDeterministically) {
  // Nearly collinear features push the accumulated f32 Gram below positive
  // definite; the same data factors fine in f64. The data is fixed, so the
  // outcome is a deterministic recorded fact, not a statistical claim.
  std::mt19937_64 rng(1);
  const Index n = 100000;
  MatrixD a(n, 3);
  VectorD b(n);
  for (Index i = 0; i < n; ++i) {
    const double x = uniform01(rng) * 1000.0;
    a(i, 0) = x;
    a(i, 1) = 2.0 * x + 0.001 * uniform01(rng);
    a(i, 2) = uniform01(rng) * 1000.0;
    b(i) = uniform01(rng) * 1000.0;
  }
  const MatrixF a32 = a.cast<float>();
  const VectorF b32 = b.cast<float>();
  EXPECT_FALSE(sketch_cholesky(a32, b32).has_value());
  EXPECT_TRUE(sketch_cholesky(a, b).has_value());
}

TEST(SketchSvd, IdentityInput) {
  const Index d = 3;
  const MatrixD a = MatrixD::Identity(d, d);
  const VectorD b = VectorD::Zero(d);
  const MatrixD s = sketch_svd(a, b);
  const MatrixD gram = accumulate_gram(a, b);
  EXPECT_LE((MatrixD(s.transpose() * s) - gram).norm(), 1e-12);
}

TEST(SketchSvd, Float64GramPreserved) {
  std::mt19937_64 rng(11);
  const MatrixD a = random_matrix(rng, 5000, 4, 0.0, 100.0);
  const VectorD b = random_matrix(rng, 5000, 1, 0.0, 100.0).col(0);
  const MatrixD s = sketch_svd(a, b);
  MatrixD ab(5000, 5);
  ab << a, b;
  EXPECT_LE(relative_frobenius_error(MatrixD(s.transpose() * s),
                                     MatrixD(ab.transpose() * ab)),
            1e-10);
}

TEST(SketchSvd, Float32PairedComparisonAgainstCoreset) {
  // Paired f32 Gram-error comparison on large-magnitude data; the tally is
  // reported rather than asserted.
  std::mt19937_64 rng(13);
  int coreset_wins = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const MatrixD a64 = random_matrix(rng, 20000, 4, 0.0, 1000.0);
    const VectorD b64 = random_matrix(rng, 20000, 1, 0.0, 1000.0).col(0);
    const MatrixF a = a64.cast<float>();
    const VectorF b = b64.cast<float>();
    MatrixD ab(a.rows(), 5);
    ab << a.cast<double>(), b.cast<double>();
    const MatrixD ref = ab.transpose() * ab;

    const MatrixF sketch = sketch_svd(a, b);
    const double sketch_err = relative_frobenius_error(
        MatrixD(sketch.cast<double>().transpose() * sketch.cast<double>()), ref);

    const auto coreset = lms_coreset(a, b, 1, 2 * 25 + 2);
    MatrixD cy(coreset.rows(), 5);
    cy << coreset.C.cast<double>(), coreset.y.cast<double>();
    const double coreset_err =
        relative_frobenius_error(MatrixD(cy.transpose() * cy), ref);
    if (coreset_err < sketch_err) ++coreset_wins;
  }
  std::cout << "[ coreset beat sketch-svd on f32 gram error in " << coreset_wins << "/"
            << trials << " trials ]\n";
  SUCCEED();
}

TEST(SketchInverse, IdentityGivesTarget) {
  const Index d = 4;
  const MatrixD a = MatrixD::Identity(d, d);
  VectorD b(d);
  b << 1, -2, 3, 4;
  const VectorD x = sketch_inverse(a, b);
  EXPECT_LE((x - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SketchInverse, MatchesQrSolutionInF64) {
  std::mt19937_64 rng(17);
  const MatrixD a = random_matrix(rng, 3000, 5, 0.0, 100.0);
  const VectorD b = random_matrix(rng, 3000, 1, 0.0, 100.0).col(0);
  const VectorD direct = sketch_inverse(a, b);
  const VectorD qr = solve_linreg(a, b);
  EXPECT_LE((direct - qr).cwiseAbs().maxCoeff(), 1e-8 * (1.0 + qr.cwiseAbs().maxCoeff()));
}

TEST(SketchInverse, SingularGramRejected) {
  MatrixD a(3, 2);
  a.col(0) << 1, 2, 3;
  a.col(1) = 2.0 * a.col(0);
  const VectorD b = VectorD::Ones(3);
  EXPECT_THROW(sketch_inverse(a, b), Singular);
}

TEST(SketchInverse, Float32ErrorRecordedAgainstF64Truth) {
  std::mt19937_64 rng(19);
  const MatrixD a64 = random_matrix(rng, 100000, 5, 0.0, 1000.0);
  const VectorD b64 = random_matrix(rng, 100000, 1, 0.0, 1000.0).col(0);
  const VectorD truth = solve_linreg(a64, b64);
  const MatrixF a32 = a64.cast<float>();
  const VectorF b32 = b64.cast<float>();
  const VectorD x = sketch_inverse(a32, b32).cast<double>();
  std::cout << "[ sketch-inverse f32 max-abs error vs f64 truth: "
            << (x - truth).cwiseAbs().maxCoeff() << " ]\n";
  SUCCEED();
}

TEST(Baselines, AgreeWithCoresetPipelineOnWellConditionedF64) {
  std::mt19937_64 rng(23);
  const MatrixD a = random_matrix(rng, 2000, 4, 0.0, 10.0);
  const VectorD b = random_matrix(rng, 2000, 1, 0.0, 10.0).col(0);
  const VectorD reference = solve_linreg(a, b);

  const auto coreset = lms_coreset(a, b, 1, 2 * 25 + 2);
  const VectorD via_coreset = solve_linreg(coreset.C, coreset.y);
  const VectorD via_inverse = sketch_inverse(a, b);
  const MatrixD svd_rows = sketch_svd(a, b);
  const VectorD via_svd =
      solve_linreg(MatrixD(svd_rows.leftCols(4)), VectorD(svd_rows.col(4)));
  const auto chol = sketch_cholesky(a, b);
  ASSERT_TRUE(chol.has_value());
  const MatrixD chol_rows = chol->transpose();
  const VectorD via_chol =
      solve_linreg(MatrixD(chol_rows.leftCols(4)), VectorD(chol_rows.col(4)));

  for (const VectorD* x : {&via_coreset, &via_inverse, &via_svd, &via_chol})
    EXPECT_LE((*x - reference).cwiseAbs().maxCoeff(),
              1e-8 * (1.0 + reference.cwiseAbs().maxCoeff()));
}
