#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <type_traits>

namespace caracore {

using Index = Eigen::Index;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixF = Matrix<float>;
using MatrixD = Matrix<double>;
using VectorF = Vector<float>;
using VectorD = Vector<double>;

/// Floating-point width carried by a dataset or a pipeline instantiation.
enum class Precision { F32, F64 };

template <class Scalar>
constexpr Precision precision_of() {
  static_assert(std::is_same_v<Scalar, float> || std::is_same_v<Scalar, double>,
                "caracore supports float and double pipelines");
  return std::is_same_v<Scalar, float> ? Precision::F32 : Precision::F64;
}

inline std::string precision_name(Precision p) {
  return p == Precision::F32 ? "f32" : "f64";
}

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// ||X - Y||_F / ||Y||_F, evaluated in double, with a zero-safe denominator.
template <class DerivedA, class DerivedB>
double relative_frobenius_error(const Eigen::MatrixBase<DerivedA>& x,
                                const Eigen::MatrixBase<DerivedB>& y) {
  const double denom = y.template cast<double>().norm();
  const double num = (x.template cast<double>() - y.template cast<double>()).norm();
  return denom > 0.0 ? num / denom : num;
}

}  // namespace caracore
