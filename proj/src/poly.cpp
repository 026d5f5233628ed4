#include "ltispec/poly.hpp"

#include <algorithm>

#include "ltispec/detail/poly_t.hpp"
#include "ltispec/errors.hpp"

namespace ltispec {

EvenPolynomial::EvenPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double EvenPolynomial::operator()(double w) const { return eval_even(*this, w); }

EvenPolynomial operator+(const EvenPolynomial& a, const EvenPolynomial& b) {
  std::vector<double> c(std::max(a.size(), b.size()), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) c[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) c[k] += b[k];
  return EvenPolynomial(std::move(c));
}

EvenPolynomial operator*(const EvenPolynomial& a, const EvenPolynomial& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return EvenPolynomial(std::move(c));
}

double eval_even(const EvenPolynomial& p, double w) {
  return detail::horner_even<double>(p.coeffs(), w);
}

TracePowerSequence trace_powers(const Eigen::MatrixXd& A, int k_max, bool squared) {
  if (A.rows() != A.cols()) throw DimensionError("trace_powers: matrix is not square");
  if (k_max < 1) throw DimensionError("trace_powers: k_max must be positive");
  return {detail::trace_powers_t<double>(A, k_max, squared), squared};
}

double bell_hessenberg(std::span<const double> r) {
  std::vector<double> rv(r.begin(), r.end());
  return detail::bell_prefix<double>(rv, static_cast<int>(rv.size())).back();
}

EvenPolynomial denominator_coeffs(const Eigen::MatrixXd& J, Precision precision) {
  if (J.rows() != J.cols()) throw DimensionError("denominator_coeffs: J is not square");
  const int n = static_cast<int>(J.rows());
  return detail::with_scalar(resolve_precision(precision, n), [&]<class T>(T) {
    return EvenPolynomial(detail::to_double(detail::denominator_coeffs_t<T>(detail::cast_matrix<T>(J))));
  });
}

}  // namespace ltispec
