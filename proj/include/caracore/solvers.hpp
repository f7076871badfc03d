#pragma once

#include <cmath>
#include <string>

#include "caracore/errors.hpp"
#include "caracore/matrix.hpp"

namespace caracore {

struct CoordinateDescentOptions {
  double tolerance = 1e-9;  // sweep-to-sweep coefficient change, relative to 1 + max|x|
  long max_sweeps = 100000;
};

namespace detail {

template <class Scalar>
constexpr double gram_condition_limit() {
  return std::is_same_v<Scalar, float> ? 1e6 : 1e12;
}

template <class Scalar>
void check_regression_input(const Matrix<Scalar>& c, const Vector<Scalar>& y,
                            const char* who) {
  if (c.rows() < 1 || c.cols() < 1)
    throw EmptyInput(std::string(who) + ": nonempty system required");
  if (c.rows() != y.size())
    throw DimensionMismatch(std::string(who) + ": rows of C must match y");
  if (!all_finite(c) || !all_finite(y))
    throw NonFinite(std::string(who) + ": non-finite input");
}

template <class Scalar>
Scalar soft_threshold(Scalar z, Scalar t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return Scalar(0);
}

// Cyclic coordinate descent on
//   1/(2n) ||C x - y||^2 + l1 ||x||_1 + l2 ||x||_2^2
// with deterministic sweep order and an incrementally maintained residual.
template <class Scalar>
Vector<Scalar> coordinate_descent(const Matrix<Scalar>& c, const Vector<Scalar>& y,
                                  Scalar l1, Scalar l2,
                                  const CoordinateDescentOptions& opt, const char* who) {
  const Index n = c.rows();
  const Index d = c.cols();
  const Scalar inv_n = Scalar(1) / static_cast<Scalar>(n);
  const Vector<Scalar> colsq = c.colwise().squaredNorm();

  Vector<Scalar> x = Vector<Scalar>::Zero(d);
  Vector<Scalar> residual = y;  // y - C x
  double gap = std::numeric_limits<double>::infinity();
  for (long sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    Scalar max_change(0);
    for (Index j = 0; j < d; ++j) {
      if (!(colsq(j) > Scalar(0))) continue;  // dead column stays at zero
      const Scalar rho = c.col(j).dot(residual) * inv_n + colsq(j) * inv_n * x(j);
      const Scalar denom = colsq(j) * inv_n + Scalar(2) * l2;
      const Scalar updated = soft_threshold(rho, l1) / denom;
      const Scalar delta = updated - x(j);
      if (delta != Scalar(0)) {
        residual -= delta * c.col(j);
        x(j) = updated;
      }
      max_change = std::max(max_change, std::abs(delta));
    }
    gap = static_cast<double>(max_change);
    if (gap <= opt.tolerance * (1.0 + static_cast<double>(x.cwiseAbs().maxCoeff())))
      return x;
  }
  throw NonConvergence(std::string(who) + ": coordinate descent did not converge",
                       opt.max_sweeps, gap);
}

}  // namespace detail

/// Least-squares solution of min ||C x - y||_2 via a column-pivoted QR of C.
/// Rejects systems whose normal matrix is numerically singular.
template <class Scalar>
Vector<Scalar> solve_linreg(const Matrix<Scalar>& c, const Vector<Scalar>& y) {
  detail::check_regression_input(c, y, "solve_linreg");
  if (c.rows() < c.cols())
    throw RankDeficient("solve_linreg: underdetermined system");
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(c);
  const Index d = c.cols();
  const Scalar rmax = std::abs(qr.matrixR()(0, 0));
  const Scalar rmin = std::abs(qr.matrixR()(d - 1, d - 1));
  const double cond_sq = rmin > Scalar(0)
                             ? std::pow(static_cast<double>(rmax / rmin), 2.0)
                             : std::numeric_limits<double>::infinity();
  if (cond_sq > detail::gram_condition_limit<Scalar>())
    throw RankDeficient("solve_linreg: normal matrix condition number too large");
  return qr.solve(y);
}

/// Ridge regression, objective ||C x - y||^2 + alpha ||x||^2, via the closed
/// form (C^T C + alpha I)^{-1} C^T y.
template <class Scalar>
Vector<Scalar> solve_ridge(const Matrix<Scalar>& c, const Vector<Scalar>& y, Scalar alpha) {
  detail::check_regression_input(c, y, "solve_ridge");
  if (alpha < Scalar(0)) throw std::invalid_argument("solve_ridge: alpha >= 0 required");
  Matrix<Scalar> normal = c.transpose() * c;
  normal.diagonal().array() += alpha;
  Eigen::LDLT<Matrix<Scalar>> ldlt(normal);
  if (ldlt.info() != Eigen::Success)
    throw RankDeficient("solve_ridge: normal matrix not factorizable");
  return ldlt.solve(c.transpose() * y);
}

/// Lasso, objective 1/(2n) ||C x - y||^2 + alpha ||x||_1, by cyclic
/// coordinate descent; n is the row count of C.
template <class Scalar>
Vector<Scalar> solve_lasso(const Matrix<Scalar>& c, const Vector<Scalar>& y, Scalar alpha,
                           const CoordinateDescentOptions& opt = {}) {
  detail::check_regression_input(c, y, "solve_lasso");
  if (alpha < Scalar(0)) throw std::invalid_argument("solve_lasso: alpha >= 0 required");
  return detail::coordinate_descent(c, y, alpha, Scalar(0), opt, "solve_lasso");
}

/// Elastic net, objective
///   1/(2n) ||C x - y||^2 + rho alpha ||x||_2^2 + (1-rho)/2 alpha ||x||_1.
template <class Scalar>
Vector<Scalar> solve_elastic(const Matrix<Scalar>& c, const Vector<Scalar>& y, Scalar alpha,
                             Scalar rho, const CoordinateDescentOptions& opt = {}) {
  detail::check_regression_input(c, y, "solve_elastic");
  if (alpha < Scalar(0)) throw std::invalid_argument("solve_elastic: alpha >= 0 required");
  if (rho < Scalar(0) || rho > Scalar(1))
    throw std::invalid_argument("solve_elastic: rho in [0, 1] required");
  const Scalar l1 = (Scalar(1) - rho) / Scalar(2) * alpha;
  const Scalar l2 = rho * alpha;
  return detail::coordinate_descent(c, y, l1, l2, opt, "solve_elastic");
}

}  // namespace caracore
