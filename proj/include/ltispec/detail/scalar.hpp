#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <Eigen/Dense>
#include <type_traits>
#include <vector>

#include "ltispec/errors.hpp"
#include "ltispec/precision.hpp"

namespace ltispec::detail {

namespace bmp = boost::multiprecision;

using Quad = bmp::float128;
using Mp100 = bmp::number<bmp::mpfr_float_backend<100, bmp::allocate_stack>, bmp::et_off>;
using Mp200 = bmp::number<bmp::mpfr_float_backend<200, bmp::allocate_stack>, bmp::et_off>;
using Mp400 = bmp::number<bmp::mpfr_float_backend<400>, bmp::et_off>;

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <class T>
Mat<T> cast_matrix(const Eigen::MatrixXd& A) {
  Mat<T> out(A.rows(), A.cols());
  for (Eigen::Index c = 0; c < A.cols(); ++c)
    for (Eigen::Index r = 0; r < A.rows(); ++r) out(r, c) = T(A(r, c));
  return out;
}

template <class T>
Eigen::MatrixXd to_double(const Mat<T>& A) {
  Eigen::MatrixXd out(A.rows(), A.cols());
  for (Eigen::Index c = 0; c < A.cols(); ++c)
    for (Eigen::Index r = 0; r < A.rows(); ++r) out(r, c) = static_cast<double>(A(r, c));
  return out;
}

template <class T>
std::vector<double> to_double(const std::vector<T>& v) {
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = static_cast<double>(v[k]);
  return out;
}

// Calls f(T{}) with the scalar type of the tier. Auto must be resolved first.
template <class F>
decltype(auto) with_scalar(Precision p, F&& f) {
  switch (p) {
    case Precision::Double:
      return f(double{});
    case Precision::Quad:
      return f(Quad{});
    case Precision::Mp100:
      return f(Mp100{});
    case Precision::Mp200:
      return f(Mp200{});
    case Precision::Mp400:
      return f(Mp400{});
    case Precision::Auto:
      break;
  }
  throw Error("with_scalar: unresolved precision");
}

}  // namespace ltispec::detail
