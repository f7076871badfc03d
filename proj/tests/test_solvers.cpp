#include "caracore/solvers.hpp"

#include <gtest/gtest.h>

#include <random>

#include "caracore/datasets.hpp"
#include "caracore/lms.hpp"
#include "caracore/verify.hpp"

using namespace caracore;
using verify_detail::random_matrix;

TEST(SolveLinreg, IdentitySystem) {
  const MatrixD c = MatrixD::Identity(2, 2);
  VectorD y(2);
  y << 1, 2;
  const VectorD x = solve_linreg(c, y);
  EXPECT_NEAR(x(0), 1.0, 1e-14);
  EXPECT_NEAR(x(1), 2.0, 1e-14);
}

TEST(SolveLinreg, ExactlyDeterminedSquareSystem) {
  MatrixD c(2, 2);
  c << 2, 1, 1, 3;
  VectorD y(2);
  y << 5, 10;
  const VectorD x = solve_linreg(c, y);
  EXPECT_LE((c * x - y).norm(), 1e-12);
}

TEST(SolveLinreg, ResidualGradientVanishes) {
  std::mt19937_64 rng(3);
  const MatrixD c = random_matrix(rng, 200, 6, 0.0, 10.0);
  const VectorD y = random_matrix(rng, 200, 1, 0.0, 10.0).col(0);
  const VectorD x = solve_linreg(c, y);
  EXPECT_LE((c.transpose() * (c * x - y)).norm(), 1e-8 * (c.transpose() * y).norm());
}

TEST(SolveLinreg, MatchesCoresetSolution) {
  std::mt19937_64 rng(5);
  const MatrixD a = random_matrix(rng, 3000, 5, 0.0, 100.0);
  const VectorD b = random_matrix(rng, 3000, 1, 0.0, 100.0).col(0);
  const auto coreset = lms_coreset(a, b, 1, 2 * 36 + 2);
  const VectorD full = solve_linreg(a, b);
  const VectorD reduced = solve_linreg(coreset.C, coreset.y);
  EXPECT_LE(((full - reduced).cwiseAbs().array() / (1.0 + full.cwiseAbs().array()))
                .maxCoeff(),
            1e-8);
}

TEST(SolveLinreg, RankDeficientRejected) {
  MatrixD c(4, 2);
  c.col(0) << 1, 2, 3, 4;
  c.col(1) = 2.0 * c.col(0);
  VectorD y = VectorD::Ones(4);
  EXPECT_THROW(solve_linreg(c, y), RankDeficient);
  EXPECT_THROW(solve_linreg(MatrixD(MatrixD::Identity(2, 3)), VectorD(VectorD::Ones(2))),
               RankDeficient);
}

TEST(SolveRidge, ZeroAlphaMatchesLeastSquares) {
  std::mt19937_64 rng(7);
  const MatrixD c = random_matrix(rng, 100, 4, 0.0, 1.0);
  const VectorD y = random_matrix(rng, 100, 1, 0.0, 1.0).col(0);
  const VectorD ls = solve_linreg(c, y);
  const VectorD ridge = solve_ridge(c, y, 0.0);
  EXPECT_LE((ls - ridge).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SolveRidge, ShrinksTowardZero) {
  std::mt19937_64 rng(9);
  const MatrixD c = random_matrix(rng, 100, 4, 0.0, 1.0);
  const VectorD y = random_matrix(rng, 100, 1, 0.0, 1.0).col(0);
  const VectorD small = solve_ridge(c, y, 1.0);
  const VectorD large = solve_ridge(c, y, 1e6);
  EXPECT_LT(large.norm(), small.norm());
  EXPECT_THROW(solve_ridge(c, y, -1.0), std::invalid_argument);
}

TEST(SolveLasso, LargeAlphaKillsAllCoefficients) {
  std::mt19937_64 rng(11);
  const MatrixD c = random_matrix(rng, 50, 3, -1.0, 1.0);
  const VectorD y = random_matrix(rng, 50, 1, -1.0, 1.0).col(0);
  const double alpha_max = (c.transpose() * y).cwiseAbs().maxCoeff() / c.rows();
  const VectorD x = solve_lasso(c, y, alpha_max * 1.0001);
  EXPECT_EQ(x.cwiseAbs().maxCoeff(), 0.0);
}

TEST(SolveLasso, BetaScaledCoresetMatchesFullData) {
  std::mt19937_64 rng(13);
  const MatrixD a = random_matrix(rng, 4000, 5, 0.0, 100.0);
  const VectorD b = random_matrix(rng, 4000, 1, 0.0, 100.0).col(0);
  const auto coreset = lms_coreset(a, b, 1, 2 * 36 + 2);
  const double alpha = 0.01 * (a.transpose() * b).cwiseAbs().maxCoeff() / a.rows();

  const VectorD full = solve_lasso(a, b, alpha);
  const VectorD reduced = solve_lasso(MatrixD(coreset.beta * coreset.C),
                                      VectorD(coreset.beta * coreset.y), alpha);
  EXPECT_LE((full - reduced).cwiseAbs().maxCoeff(), 1e-6 * (1.0 + full.cwiseAbs().maxCoeff()));
}

TEST(SolveElastic, ReducesToLassoAtRhoZero) {
  std::mt19937_64 rng(17);
  const MatrixD c = random_matrix(rng, 80, 4, -1.0, 1.0);
  const VectorD y = random_matrix(rng, 80, 1, -1.0, 1.0).col(0);
  // rho = 0: pure l1 term at alpha/2
  const VectorD elastic = solve_elastic(c, y, 0.2, 0.0);
  const VectorD lasso = solve_lasso(c, y, 0.1);
  EXPECT_LE((elastic - lasso).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_THROW(solve_elastic(c, y, 0.1, 1.5), std::invalid_argument);
}

TEST(SolveElastic, BetaScaledCoresetMatchesFullData) {
  std::mt19937_64 rng(19);
  const MatrixD a = random_matrix(rng, 4000, 5, 0.0, 100.0);
  const VectorD b = random_matrix(rng, 4000, 1, 0.0, 100.0).col(0);
  const auto coreset = lms_coreset(a, b, 1, 2 * 36 + 2);
  const double alpha = 0.01 * (a.transpose() * b).cwiseAbs().maxCoeff() / a.rows();

  const VectorD full = solve_elastic(a, b, alpha, 0.5);
  const VectorD reduced = solve_elastic(MatrixD(coreset.beta * coreset.C),
                                        VectorD(coreset.beta * coreset.y), alpha, 0.5);
  EXPECT_LE((full - reduced).cwiseAbs().maxCoeff(), 1e-6 * (1.0 + full.cwiseAbs().maxCoeff()));
}

TEST(CoordinateDescent, NonConvergenceReportsIterationsAndGap) {
  std::mt19937_64 rng(23);
  const MatrixD c = random_matrix(rng, 60, 5, -1.0, 1.0);
  const VectorD y = random_matrix(rng, 60, 1, -1.0, 1.0).col(0);
  CoordinateDescentOptions opt;
  opt.max_sweeps = 1;
  opt.tolerance = 1e-16;
  try {
    solve_lasso(c, y, 1e-6, opt);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.iterations, 1);
    EXPECT_GT(e.last_gap, 0.0);
  }
}

TEST(CoordinateDescent, DeadColumnStaysZero) {
  MatrixD c(4, 2);
  c.col(0) << 1, 2, 3, 4;
  c.col(1).setZero();
  VectorD y(4);
  y << 1, 2, 3, 4;
  const VectorD x = solve_lasso(c, y, 1e-6);
  EXPECT_EQ(x(1), 0.0);
  EXPECT_NEAR(x(0), 1.0, 1e-5);
}
