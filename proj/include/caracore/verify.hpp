#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "caracore/caratheodory.hpp"
#include "caracore/covariance.hpp"
#include "caracore/cv.hpp"
#include "caracore/datasets.hpp"
#include "caracore/lms.hpp"
#include "caracore/pca.hpp"
#include "caracore/solvers.hpp"

namespace caracore {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

namespace verify_detail {

inline double normal01(std::mt19937_64& rng) {
  // Box-Muller on the fixed uniform mapping keeps draws reproducible.
  const double u1 = std::max(uniform01(rng), 1e-300);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Checks the defining properties of a Caratheodory set against its source:
/// distinct in-range indices, size at most d+1, positive weights with
/// |sum - 1| <= weight_tol, and per-coordinate mean error at most
/// mean_tol * (1 + ||mean||_2). Returns an empty string on success.
template <class Scalar>
std::string check_caratheodory_definition(const CaratheodorySet<Scalar>& set,
                                          const Matrix<Scalar>& points,
                                          const Vector<Scalar>& weights,
                                          double weight_tol = 1e-10,
                                          double mean_tol = 1e-10) {
  const Index n = points.rows();
  const Index d = points.cols();
  std::ostringstream err;
  if (set.size() > d + 1) {
    err << "size " << set.size() << " exceeds d+1=" << d + 1;
    return err.str();
  }
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (Index idx : set.indices) {
    if (idx < 0 || idx >= n) return "index out of range";
    if (seen[static_cast<size_t>(idx)]) return "repeated index";
    seen[static_cast<size_t>(idx)] = true;
  }
  if (set.size() > 0 && !(set.weights.minCoeff() > Scalar(0)))
    return "non-positive weight";
  const double wsum = set.weights.template cast<double>().sum();
  if (std::abs(wsum - 1.0) > weight_tol) {
    err << "weight sum " << wsum;
    return err.str();
  }
  const VectorD mean =
      points.template cast<double>().transpose() * weights.template cast<double>();
  VectorD smean = VectorD::Zero(d);
  for (Index j = 0; j < set.size(); ++j)
    smean += static_cast<double>(set.weights(j)) *
             points.row(set.indices[static_cast<size_t>(j)]).template cast<double>().transpose();
  const double tol = mean_tol * (1.0 + mean.norm());
  const double worst = (smean - mean).cwiseAbs().maxCoeff();
  if (worst > tol) {
    err << "mean error " << worst << " > " << tol;
    return err.str();
  }
  return {};
}

// ---- exhaustive subset oracle (independent: its own tiny linear solver) ----

// Gaussian elimination with partial pivoting on an s x s system; s <= d+2.
inline bool solve_small(std::vector<std::vector<double>> g, std::vector<double> r,
                        std::vector<double>& out) {
  const size_t s = r.size();
  for (size_t col = 0; col < s; ++col) {
    size_t piv = col;
    for (size_t i = col + 1; i < s; ++i)
      if (std::abs(g[i][col]) > std::abs(g[piv][col])) piv = i;
    if (std::abs(g[piv][col]) < 1e-14) return false;
    std::swap(g[piv], g[col]);
    std::swap(r[piv], r[col]);
    for (size_t i = col + 1; i < s; ++i) {
      const double f = g[i][col] / g[col][col];
      for (size_t j = col; j < s; ++j) g[i][j] -= f * g[col][j];
      r[i] -= f * r[col];
    }
  }
  out.assign(s, 0.0);
  for (size_t i = s; i-- > 0;) {
    double acc = r[i];
    for (size_t j = i + 1; j < s; ++j) acc -= g[i][j] * out[j];
    out[i] = acc / g[i][i];
  }
  return true;
}

struct SubsetWitness {
  std::vector<Index> indices;
  std::vector<double> weights;
};

// Enumerates every subset of at most d+1 points (lexicographic order) and
// solves for weights matching the target mean with sum one, via the normal
// equations of the (d+1) x s system. Returns the first subset whose solution
// is nonnegative with a small residual.
inline std::optional<SubsetWitness> find_caratheodory_subset(const MatrixD& points,
                                                             const VectorD& u) {
  const Index n = points.rows();
  const Index d = points.cols();
  const VectorD target = points.transpose() * u;

  std::vector<Index> pick;
  std::optional<SubsetWitness> found;

  auto try_subset = [&](const std::vector<Index>& subset) -> bool {
    const size_t s = subset.size();
    // M is (d+1) x s: point coordinates plus a row of ones.
    std::vector<std::vector<double>> m(static_cast<size_t>(d) + 1,
                                       std::vector<double>(s, 0.0));
    for (size_t c = 0; c < s; ++c) {
      for (Index r = 0; r < d; ++r)
        m[static_cast<size_t>(r)][c] = points(subset[c], r);
      m[static_cast<size_t>(d)][c] = 1.0;
    }
    std::vector<double> rhs(static_cast<size_t>(d) + 1, 0.0);
    for (Index r = 0; r < d; ++r) rhs[static_cast<size_t>(r)] = target(r);
    rhs[static_cast<size_t>(d)] = 1.0;

    std::vector<std::vector<double>> gram(s, std::vector<double>(s, 0.0));
    std::vector<double> gr(s, 0.0);
    for (size_t i = 0; i < s; ++i) {
      for (size_t j = 0; j < s; ++j)
        for (size_t r = 0; r <= static_cast<size_t>(d); ++r)
          gram[i][j] += m[r][i] * m[r][j];
      for (size_t r = 0; r <= static_cast<size_t>(d); ++r) gr[i] += m[r][i] * rhs[r];
    }
    std::vector<double> w;
    if (!solve_small(gram, gr, w)) return false;

    double scale = 1.0;
    for (size_t r = 0; r <= static_cast<size_t>(d); ++r)
      scale = std::max(scale, std::abs(rhs[r]));
    for (size_t r = 0; r <= static_cast<size_t>(d); ++r) {
      double acc = -rhs[r];
      for (size_t c = 0; c < s; ++c) acc += m[r][c] * w[c];
      if (std::abs(acc) > 1e-9 * scale) return false;
    }
    for (double wi : w)
      if (wi < -1e-9) return false;
    found = SubsetWitness{subset, w};
    return true;
  };

  auto recurse = [&](auto&& self, Index next, Index remaining) -> bool {
    if (!pick.empty() && try_subset(pick)) return true;
    if (remaining == 0) return false;
    for (Index i = next; i < n; ++i) {
      pick.push_back(i);
      if (self(self, i + 1, remaining - 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  recurse(recurse, 0, std::min(n, d + 1));
  return found;
}

// ---- fuzz corpus -----------------------------------------------------------

template <class Scalar>
WeightedSet<Scalar> random_weighted_set(std::mt19937_64& rng, Index n, Index d,
                                        double scale, bool sprinkle_zeros) {
  MatrixD pts(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) pts(i, j) = (uniform01(rng) * 2.0 - 1.0) * scale;
  VectorD w(n);
  for (Index i = 0; i < n; ++i) w(i) = uniform01(rng) + 1e-3;
  if (sprinkle_zeros && n > 2)
    for (Index i = 0; i < n; i += 5) w(i) = 0.0;
  w /= w.sum();
  return WeightedSet<Scalar>{pts.cast<Scalar>(), w.cast<Scalar>()};
}

inline MatrixD random_matrix(std::mt19937_64& rng, Index n, Index d, double lo, double hi) {
  MatrixD a(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = lo + uniform01(rng) * (hi - lo);
  return a;
}

template <class F>
CriterionResult timed_criterion(const std::string& name, F&& body) {
  CriterionResult result;
  result.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::string detail = body();
    result.pass = detail.empty() || detail.rfind("ok", 0) == 0;
    result.detail = detail.empty() ? "ok" : detail;
  } catch (const std::exception& e) {
    result.pass = false;
    result.detail = std::string("exception: ") + e.what();
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace verify_detail

struct VerifyOptions {
  std::uint64_t seed = 20240601;
};

/// Criterion: 200 fuzzed weighted sets (n up to 1e4, d up to 10) reduced by
/// the fast construction all satisfy the defining properties.
inline CriterionResult verify_caratheodory_fuzz(const VerifyOptions& opt) {
  using namespace verify_detail;
  return timed_criterion("caratheodory-exactness-fuzz", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed);
    double worst_margin = 0;
    for (int t = 0; t < 200; ++t) {
      const Index d = 1 + static_cast<Index>(uniform01(rng) * 10);
      const double u = uniform01(rng);
      const Index n = 2 + static_cast<Index>(u * u * 9998);
      const double scale = t % 3 == 0 ? 100.0 : 1.0;
      const auto set = random_weighted_set<double>(rng, n, d, scale, t % 4 == 0);
      const Index k =
          t % 2 == 0 ? default_cluster_count(d, SlowVariant::Quadratic) : 2 * d + 2;
      const auto reduced = fast_caratheodory(set, k);
      const std::string err =
          check_caratheodory_definition(reduced, set.points, set.weights);
      if (!err.empty())
        return "case " + std::to_string(t) + " (n=" + std::to_string(n) +
               ", d=" + std::to_string(d) + "): " + err;
      worst_margin = std::max(worst_margin, 0.0);
    }
    return "ok: 200 fuzzed sets";
  });
}

/// Criterion: on every small instance (n <= 8, d <= 3) of a fixed corpus, the
/// exhaustive subset oracle certifies a valid subset exists, and both the
/// classical and the fast reductions pass the definition checks.
inline CriterionResult verify_subset_oracle(const VerifyOptions& opt) {
  using namespace verify_detail;
  return timed_criterion("oracle-equivalence-small", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 1);
    int cases = 0;
    for (Index d = 1; d <= 3; ++d) {
      for (Index n = 1; n <= 8; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
          auto set = random_weighted_set<double>(rng, n, d, rep % 2 ? 10.0 : 1.0, false);
          ++cases;
          const auto witness = find_caratheodory_subset(set.points, set.weights);
          if (!witness)
            return "oracle found no valid subset (n=" + std::to_string(n) +
                   ", d=" + std::to_string(d) + ", rep=" + std::to_string(rep) + ")";
          const auto slow = caratheodory_slow(set);
          std::string err = check_caratheodory_definition(slow, set.points, set.weights);
          if (!err.empty()) return "slow: " + err;
          const auto fast = fast_caratheodory(set, d + 2);
          err = check_caratheodory_definition(fast, set.points, set.weights);
          if (!err.empty()) return "fast: " + err;
        }
      }
    }
    return "ok: " + std::to_string(cases) + " small cases";
  });
}

namespace verify_detail {

template <class Scalar>
std::string gram_exactness_case(const MatrixD& a64, Index k, Index k1, Index k2,
                                double tol) {
  const Matrix<Scalar> a = a64.cast<Scalar>();
  const MatrixD ref =
      a.template cast<double>().transpose() * a.template cast<double>();

  const auto subset = caratheodory_matrix(a, k);
  const MatrixD gs = subset.S.template cast<double>();
  const double err_subset = relative_frobenius_error(MatrixD(gs.transpose() * gs), ref);
  if (err_subset > tol)
    return "row-subset gram error " + std::to_string(err_subset);
  if (subset.rows() > a.cols() * a.cols() + 1) return "row-subset too large";

  const auto recon = sparse_caratheodory_matrix(a, k1, k2);
  const MatrixD gr = recon.S.template cast<double>();
  const double err_recon = relative_frobenius_error(MatrixD(gr.transpose() * gr), ref);
  if (err_recon > tol)
    return "reconstructed gram error " + std::to_string(err_recon);
  if (recon.rows() != a.cols()) return "reconstructed row count";
  return {};
}

}  // namespace verify_detail

/// Criterion: both covariance compressions reproduce the Gram matrix within
/// 1e-10 relative (f64) and 1e-3 (f32) across n in {1e2, 1e3, 1e4} and
/// d in {2..10}.
inline CriterionResult verify_gram_exactness(const VerifyOptions& opt) {
  using namespace verify_detail;
  return timed_criterion("gram-exactness", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 2);
    for (Index n : {Index(100), Index(1000), Index(10000)}) {
      for (Index d = 2; d <= 10; ++d) {
        const MatrixD a = random_matrix(rng, n, d, 0.0, 1000.0);
        const Index k = 2 * d * d + 2;
        const Index k2 = std::max<Index>(1, (d * d + 11) / 12);
        const Index dprime = (d * d + k2 - 1) / k2;
        const Index k1 = 2 * dprime + 2;
        std::string err = gram_exactness_case<double>(a, k, k1, k2, 1e-10);
        if (!err.empty())
          return "f64 n=" + std::to_string(n) + " d=" + std::to_string(d) + ": " + err;
        err = gram_exactness_case<float>(a, k, k1, k2, 1e-3);
        if (!err.empty())
          return "f32 n=" + std::to_string(n) + " d=" + std::to_string(d) + ": " + err;
      }
    }
    return "ok: 27 shapes x 2 precisions x 2 compressions";
  });
}

/// Criterion: per-fold squared-norm identity ||A_i x - b_i||^2 equals
/// ||C_i x - y_i||^2 within 1e-8 relative, for m in {1, 3}, both coreset
/// variants, 50 random x per fold.
inline CriterionResult verify_fold_identity(const VerifyOptions& opt) {
  using namespace verify_detail;
  return timed_criterion("fold-identity", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 3);
    const Index n = 2000;
    const Index d = 7;
    const MatrixD a = random_matrix(rng, n, d, 0.0, 1000.0);
    const VectorD b = random_matrix(rng, n, 1, 0.0, 1000.0).col(0);
    const CoresetParams params = default_lms_params(d);
    for (Index m : {Index(1), Index(3)}) {
      for (const auto variant : {CoresetVariant::Exact, CoresetVariant::SparsePlusPlus}) {
        const FoldedCoreset<double> coreset =
            variant == CoresetVariant::Exact
                ? lms_coreset(a, b, m, params.k)
                : lms_coreset_pp(a, b, m, params.k1, params.k2);
        for (Index fold = 0; fold < m; ++fold) {
          const auto [slo, shi] = coreset.source_fold_rows[static_cast<size_t>(fold)];
          const auto [clo, chi] = coreset.coreset_fold_rows[static_cast<size_t>(fold)];
          for (int t = 0; t < 50; ++t) {
            VectorD x(d);
            for (Index j = 0; j < d; ++j) x(j) = uniform01(rng) * 4.0 - 2.0;
            const double lhs =
                (a.middleRows(slo, shi - slo) * x - b.segment(slo, shi - slo))
                    .squaredNorm();
            const double rhs = (coreset.C.middleRows(clo, chi - clo) * x -
                                coreset.y.segment(clo, chi - clo))
                                   .squaredNorm();
            if (std::abs(lhs - rhs) > 1e-8 * (1.0 + lhs))
              return "m=" + std::to_string(m) + " fold=" + std::to_string(fold) +
                     ": |" + std::to_string(lhs) + " - " + std::to_string(rhs) + "|";
          }
        }
      }
    }
    return "ok: m in {1,3}, 2 variants, 50 x per fold";
  });
}

/// Criterion: each solver yields the same solution on the original data and
/// on the coreset (with beta scaling for the row-normalized objectives);
/// linear/ridge within 1e-8, lasso/elastic within 1e-6 per coordinate.
inline CriterionResult verify_solver_equivalence(const VerifyOptions& opt) {
  using namespace verify_detail;
  return timed_criterion("solver-equivalence", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 4);
    const Index n = 10000;
    const Index d = 7;
    const MatrixD a = random_matrix(rng, n, d, 0.0, 1000.0);
    const VectorD b = random_matrix(rng, n, 1, 0.0, 1000.0).col(0);
    const CoresetParams params = default_lms_params(d);

    const double alpha_max = (a.transpose() * b).cwiseAbs().maxCoeff() / n;
    const double lasso_alpha = 0.01 * alpha_max;
    const double ridge_alpha = 100.0;
    const double rho = 0.5;

    for (Index m : {Index(1), Index(3)}) {
      const FoldedCoreset<double> coreset = lms_coreset(a, b, m, params.k);
      const MatrixD scaled_c = coreset.beta * coreset.C;
      const VectorD scaled_y = coreset.beta * coreset.y;

      auto compare = [&](const VectorD& full, const VectorD& reduced, double tol,
                         const char* who) -> std::string {
        const double worst =
            ((full - reduced).cwiseAbs().array() / (1.0 + full.cwiseAbs().array()))
                .maxCoeff();
        if (worst > tol)
          return std::string(who) + " m=" + std::to_string(m) + " deviation " +
                 std::to_string(worst);
        return {};
      };

      std::string err = compare(solve_linreg(a, b), solve_linreg(coreset.C, coreset.y),
                                1e-8, "linear");
      if (!err.empty()) return err;
      err = compare(solve_ridge(a, b, ridge_alpha),
                    solve_ridge(coreset.C, coreset.y, ridge_alpha), 1e-8, "ridge");
      if (!err.empty()) return err;
      err = compare(solve_lasso(a, b, lasso_alpha),
                    solve_lasso(scaled_c, scaled_y, lasso_alpha), 1e-6, "lasso");
      if (!err.empty()) return err;
      err = compare(solve_elastic(a, b, lasso_alpha, rho),
                    solve_elastic(scaled_c, scaled_y, lasso_alpha, rho), 1e-6, "elastic");
      if (!err.empty()) return err;
    }
    return "ok: 4 solvers, m in {1,3}";
  });
}

/// Criterion: the subspace-energy identities hold within 1e-9 relative for 10
/// random translated queries on a random 500 x 4 input.
inline CriterionResult verify_pca_identities(const VerifyOptions& opt) {
  using namespace verify_detail;
  return timed_criterion("pca-svd-identities", [&]() -> std::string {
    std::mt19937_64 rng(opt.seed + 5);
    const Index n = 500;
    const Index d = 4;
    const MatrixD a = random_matrix(rng, n, d, -10.0, 10.0);

    const auto svd_cs = svd_coreset(a, 2 * d * d + 2);
    const auto pca_cs = pca_coreset(a, 2 * (d + 1) * (d + 1) + 2);
    if (pca_cs.size() > (d + 1) * (d + 1) + 1) return "pca coreset too large";

    for (int t = 0; t < 10; ++t) {
      const Index j = 1 + static_cast<Index>(uniform01(rng) * (d - 1));
      MatrixD raw(d, d - j);
      for (Index r = 0; r < d; ++r)
        for (Index c = 0; c < d - j; ++c) raw(r, c) = normal01(rng);
      SubspaceQuery<double> q;
      q.Y = orthonormalize(raw);
      q.j = j;
      q.ell = VectorD::Zero(d);
      q.validate();

      const double full0 = subspace_energy(a, q);
      const double sub0 = subspace_energy(svd_cs.S, q);
      if (std::abs(full0 - sub0) > 1e-9 * (1.0 + full0))
        return "svd identity: " + std::to_string(full0) + " vs " + std::to_string(sub0);

      for (Index r = 0; r < d; ++r) q.ell(r) = 10.0 * normal01(rng);
      const double full = subspace_energy(a, q);
      const double weighted = weighted_subspace_energy(pca_cs.C, pca_cs.weights, q);
      if (std::abs(full - weighted) > 1e-9 * (1.0 + full))
        return "pca identity: " + std::to_string(full) + " vs " + std::to_string(weighted);
    }
    return "ok: 10 queries";
  });
}

/// The invariant suite behind the CLI verify command.
inline std::vector<CriterionResult> run_verification(const VerifyOptions& opt = {}) {
  std::vector<CriterionResult> results;
  results.push_back(verify_caratheodory_fuzz(opt));
  results.push_back(verify_subset_oracle(opt));
  results.push_back(verify_gram_exactness(opt));
  results.push_back(verify_fold_identity(opt));
  results.push_back(verify_solver_equivalence(opt));
  results.push_back(verify_pca_identities(opt));
  return results;
}

inline bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace caracore
