#pragma once

#include <chrono>
#include <limits>
#include <string>
#include <vector>

#include "caracore/lms.hpp"
#include "caracore/matrix.hpp"
#include "caracore/solvers.hpp"

namespace caracore {

enum class SolverKind { Linear, Ridge, Lasso, ElasticNet };

inline std::string solver_name(SolverKind s) {
  switch (s) {
    case SolverKind::Linear: return "linear";
    case SolverKind::Ridge: return "ridge";
    case SolverKind::Lasso: return "lasso";
    case SolverKind::ElasticNet: return "elastic";
  }
  return "?";
}

template <class Scalar>
struct RegularizationGrid {
  std::vector<Scalar> alphas;
  Scalar rho = Scalar(0.5);
  Index folds = 1;

  void validate() const {
    if (alphas.empty())
      throw std::invalid_argument("RegularizationGrid: at least one alpha required");
    for (Scalar a : alphas)
      if (!(a >= Scalar(0)))
        throw std::invalid_argument("RegularizationGrid: alphas must be >= 0");
    if (rho < Scalar(0) || rho > Scalar(1))
      throw std::invalid_argument("RegularizationGrid: rho in [0, 1] required");
    if (folds < 1) throw std::invalid_argument("RegularizationGrid: folds >= 1 required");
  }
};

/// Cluster parameters of the fold coresets; zeros are filled with the
/// defaults for the feature dimension, see default_lms_params.
struct CoresetParams {
  Index k = 0;
  Index k1 = 0;
  Index k2 = 0;
};

/// Defaults for feature dimension d: k = 2(d+1)^2 + 2, and for the sparse
/// variant a target block width of 12, giving k2 = ceil((d+1)^2 / 12) and
/// k1 = 2*12 + 2.
inline CoresetParams default_lms_params(Index d, Index block_width_target = 12) {
  const Index width = d + 1;
  CoresetParams p;
  p.k = 2 * width * width + 2;
  p.k2 = (width * width + block_width_target - 1) / block_width_target;
  p.k1 = 2 * block_width_target + 2;
  return p;
}

template <class Scalar>
struct CvResult {
  Vector<Scalar> coefficients;
  Scalar best_alpha = 0;
  std::vector<Scalar> mean_scores;  // aligned with the grid's alphas
  Index coreset_builds = 0;
  double coreset_build_seconds = 0;
};

namespace detail {

template <class Scalar>
double fold_mse(const Matrix<Scalar>& a, const Vector<Scalar>& b,
                std::pair<Index, Index> range, const Vector<Scalar>& x) {
  const Index len = range.second - range.first;
  const Vector<Scalar> r =
      a.middleRows(range.first, len) * x - b.segment(range.first, len);
  return static_cast<double>(r.squaredNorm()) / static_cast<double>(len);
}

template <class Scalar>
Vector<Scalar> run_solver(SolverKind kind, const Matrix<Scalar>& c, const Vector<Scalar>& y,
                          Scalar alpha, Scalar rho) {
  switch (kind) {
    case SolverKind::Linear: return solve_linreg(c, y);
    case SolverKind::Ridge: return solve_ridge(c, y, alpha);
    case SolverKind::Lasso: return solve_lasso(c, y, alpha);
    case SolverKind::ElasticNet: return solve_elastic(c, y, alpha, rho);
  }
  throw std::invalid_argument("run_solver: unknown solver");
}

inline bool uses_row_normalized_objective(SolverKind kind) {
  return kind == SolverKind::Lasso || kind == SolverKind::ElasticNet;
}

// One training system per held-out fold, plus the refit system over all data.
template <class Scalar>
struct CvSystems {
  std::vector<Matrix<Scalar>> train_c;  // indexed by held-out fold
  std::vector<Vector<Scalar>> train_y;
  Matrix<Scalar> full_c;
  Vector<Scalar> full_y;
};

// Generic m-fold CV: picks the alpha with the smallest mean held-out MSE
// (ties to the smallest alpha) and refits on the full training system.
// Scoring always runs against the original held-out rows.
template <class Scalar>
CvResult<Scalar> cross_validate(const Matrix<Scalar>& a, const Vector<Scalar>& b,
                                const RegularizationGrid<Scalar>& grid, SolverKind solver,
                                const CvSystems<Scalar>& sys,
                                const std::vector<std::pair<Index, Index>>& fold_rows) {
  const Index m = grid.folds;
  const auto n_alphas = static_cast<Index>(grid.alphas.size());

  CvResult<Scalar> out;
  out.mean_scores.assign(static_cast<size_t>(n_alphas), Scalar(0));

  if (solver == SolverKind::Linear) {
    // Alpha plays no role; one model per fold covers the whole grid.
    double score = 0;
    for (Index i = 0; i < m; ++i) {
      const Vector<Scalar> x = solve_linreg(sys.train_c[static_cast<size_t>(i)],
                                            sys.train_y[static_cast<size_t>(i)]);
      score += fold_mse(a, b, fold_rows[static_cast<size_t>(i)], x);
    }
    score /= static_cast<double>(m);
    for (auto& s : out.mean_scores) s = static_cast<Scalar>(score);
  } else {
    for (Index ai = 0; ai < n_alphas; ++ai) {
      const Scalar alpha = grid.alphas[static_cast<size_t>(ai)];
      double score = 0;
      for (Index i = 0; i < m; ++i) {
        const Vector<Scalar> x =
            run_solver(solver, sys.train_c[static_cast<size_t>(i)],
                       sys.train_y[static_cast<size_t>(i)], alpha, grid.rho);
        score += fold_mse(a, b, fold_rows[static_cast<size_t>(i)], x);
      }
      out.mean_scores[static_cast<size_t>(ai)] = static_cast<Scalar>(score / m);
    }
  }

  Index best = 0;
  for (Index ai = 1; ai < n_alphas; ++ai) {
    const Scalar s = out.mean_scores[static_cast<size_t>(ai)];
    const Scalar sb = out.mean_scores[static_cast<size_t>(best)];
    if (s < sb || (s == sb && grid.alphas[static_cast<size_t>(ai)] <
                                  grid.alphas[static_cast<size_t>(best)]))
      best = ai;
  }
  out.best_alpha = grid.alphas[static_cast<size_t>(best)];
  out.coefficients =
      run_solver(solver, sys.full_c, sys.full_y, out.best_alpha, grid.rho);
  return out;
}

}  // namespace detail

/// m-fold cross validation on per-fold coresets: the m coresets are built
/// once, every (alpha, fold) run trains on the other folds' stacked coresets,
/// and scoring uses the original held-out rows. For the row-normalized
/// solvers (lasso, elastic net) each training system is scaled by
/// beta = sqrt(coreset rows / original rows), which makes the compressed
/// objective equal the full-data objective.
template <class Scalar>
CvResult<Scalar> boosted_cv(const Matrix<Scalar>& a, const Vector<Scalar>& b,
                            const RegularizationGrid<Scalar>& grid, SolverKind solver,
                            CoresetVariant variant, CoresetParams params = {}) {
  grid.validate();
  if (grid.folds < 2)
    throw std::invalid_argument("boosted_cv: m >= 2 folds required");
  const Index m = grid.folds;
  const Index d = a.cols();
  const CoresetParams defaults = default_lms_params(d);
  const Index k = params.k > 0 ? params.k : defaults.k;
  const Index k1 = params.k1 > 0 ? params.k1 : defaults.k1;
  const Index k2 = params.k2 > 0 ? params.k2 : defaults.k2;

  const auto t0 = std::chrono::steady_clock::now();
  const FoldedCoreset<Scalar> coreset =
      variant == CoresetVariant::Exact ? lms_coreset(a, b, m, k)
                                       : lms_coreset_pp(a, b, m, k1, k2);
  const auto t1 = std::chrono::steady_clock::now();

  const bool scaled = detail::uses_row_normalized_objective(solver);
  detail::CvSystems<Scalar> sys;
  sys.train_c.resize(static_cast<size_t>(m));
  sys.train_y.resize(static_cast<size_t>(m));
  for (Index held = 0; held < m; ++held) {
    Index rows = 0;
    Index source_rows = 0;
    for (Index i = 0; i < m; ++i) {
      if (i == held) continue;
      const auto [lo, hi] = coreset.coreset_fold_rows[static_cast<size_t>(i)];
      rows += hi - lo;
      const auto [slo, shi] = coreset.source_fold_rows[static_cast<size_t>(i)];
      source_rows += shi - slo;
    }
    Matrix<Scalar> c(rows, d);
    Vector<Scalar> y(rows);
    Index at = 0;
    for (Index i = 0; i < m; ++i) {
      if (i == held) continue;
      const auto [lo, hi] = coreset.coreset_fold_rows[static_cast<size_t>(i)];
      c.middleRows(at, hi - lo) = coreset.C.middleRows(lo, hi - lo);
      y.segment(at, hi - lo) = coreset.y.segment(lo, hi - lo);
      at += hi - lo;
    }
    if (scaled) {
      const Scalar beta =
          std::sqrt(static_cast<Scalar>(rows) / static_cast<Scalar>(source_rows));
      c *= beta;
      y *= beta;
    }
    sys.train_c[static_cast<size_t>(held)] = std::move(c);
    sys.train_y[static_cast<size_t>(held)] = std::move(y);
  }
  sys.full_c = coreset.C;
  sys.full_y = coreset.y;
  if (scaled) {
    sys.full_c *= coreset.beta;
    sys.full_y *= coreset.beta;
  }

  CvResult<Scalar> out =
      detail::cross_validate(a, b, grid, solver, sys, coreset.source_fold_rows);
  out.coreset_builds = m;
  out.coreset_build_seconds = std::chrono::duration<double>(t1 - t0).count();
  return out;
}

/// Reference m-fold cross validation over the original rows: every
/// (alpha, fold) run trains on the stacked rows of the other folds.
template <class Scalar>
CvResult<Scalar> unboosted_cv(const Matrix<Scalar>& a, const Vector<Scalar>& b,
                              const RegularizationGrid<Scalar>& grid, SolverKind solver) {
  grid.validate();
  if (grid.folds < 2)
    throw std::invalid_argument("unboosted_cv: m >= 2 folds required");
  const Index m = grid.folds;
  const Index d = a.cols();
  const auto ranges = fold_ranges(a.rows(), m);

  detail::CvSystems<Scalar> sys;
  sys.train_c.resize(static_cast<size_t>(m));
  sys.train_y.resize(static_cast<size_t>(m));
  for (Index held = 0; held < m; ++held) {
    Index rows = 0;
    for (Index i = 0; i < m; ++i)
      if (i != held)
        rows += ranges[static_cast<size_t>(i)].second - ranges[static_cast<size_t>(i)].first;
    Matrix<Scalar> c(rows, d);
    Vector<Scalar> y(rows);
    Index at = 0;
    for (Index i = 0; i < m; ++i) {
      if (i == held) continue;
      const auto [lo, hi] = ranges[static_cast<size_t>(i)];
      c.middleRows(at, hi - lo) = a.middleRows(lo, hi - lo);
      y.segment(at, hi - lo) = b.segment(lo, hi - lo);
      at += hi - lo;
    }
    sys.train_c[static_cast<size_t>(held)] = std::move(c);
    sys.train_y[static_cast<size_t>(held)] = std::move(y);
  }
  sys.full_c = a;
  sys.full_y = b;

  return detail::cross_validate(a, b, grid, solver, sys, ranges);
}

}  // namespace caracore
