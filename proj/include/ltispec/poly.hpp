#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "ltispec/precision.hpp"

namespace ltispec {

/// Real polynomial in w^2: p(w) = sum_a coeffs[a] * w^(2a).
class EvenPolynomial {
 public:
  EvenPolynomial() : coeffs_{0.0} {}
  explicit EvenPolynomial(std::vector<double> coeffs);

  const std::vector<double>& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::size_t a) const { return coeffs_[a]; }

  double operator()(double w) const;

  friend EvenPolynomial operator+(const EvenPolynomial& a, const EvenPolynomial& b);
  friend EvenPolynomial operator*(const EvenPolynomial& a, const EvenPolynomial& b);
  friend bool operator==(const EvenPolynomial&, const EvenPolynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

/// Horner evaluation in w^2.
double eval_even(const EvenPolynomial& p, double w);

struct TracePowerSequence {
  std::vector<double> r;  // r[k-1] = Tr(A^{2k}) or Tr(A^k)
  bool squared = true;
};

/// Tr(A^{2k}) (squared) or Tr(A^k) (plain) for k = 1..k_max.
TracePowerSequence trace_powers(const Eigen::MatrixXd& A, int k_max, bool squared);

/// Determinant of the k x k Hessenberg matrix with first row -r^1..-r^k,
/// shifted copies below and subdiagonal -1, -2, ..., -(k-1). k = r.size().
double bell_hessenberg(std::span<const double> r);

/// q_0..q_n of Q(w) = |det(J + iwI)|^2, q_n = 1.
EvenPolynomial denominator_coeffs(const Eigen::MatrixXd& J, Precision precision = Precision::Auto);

}  // namespace ltispec
