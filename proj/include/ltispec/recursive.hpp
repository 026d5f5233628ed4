#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "ltispec/lti.hpp"
#include "ltispec/poly.hpp"
#include "ltispec/precision.hpp"

namespace ltispec {

/// S(w) = (sum P_a w^{2a} + i w sum P'_a w^{2a}) / sum q_a w^{2a}.
struct SpectralRational {
  int n = 0;
  std::vector<Eigen::MatrixXd> P;   // P_0 .. P_{n-1}, symmetric
  std::vector<Eigen::MatrixXd> Pp;  // P'_0 .. P'_{n-2}, antisymmetric
  EvenPolynomial q;                 // q_0 .. q_n, q_n = 1
  Precision precision = Precision::Auto;  // tier the coefficients came from

  EvenPolynomial real_part(int i, int j) const;  // P^{ij}(w)
  EvenPolynomial imag_part(int i, int j) const;  // P'^{ij}(w), zero polynomial when n = 1
};

/// Redundant terminal identities of the recursion:
/// r1 = ||J P_0 - P_0 J^T - J P'_0 J^T||_F, r2 = ||q_0 C - J P_0 J^T||_F.
/// scale1 = 2||J|| ||P_0|| + ||J||^2 ||P'_0||, scale2 = q_0 ||C|| + ||J||^2 ||P_0||.
struct ResidualReport {
  double r1 = 0, r2 = 0;
  double scale1 = 0, scale2 = 0;

  double relative1() const { return scale1 > 0 ? r1 / scale1 : r1; }
  double relative2() const { return scale2 > 0 ? r2 / scale2 : r2; }
  bool healthy(double tol = 1e-8) const { return relative1() <= tol && relative2() <= tol; }
};

struct SolveOptions {
  Precision precision = Precision::Auto;
  bool allow_marginal = false;
  bool check_stability = true;
  // Residual level above which the solve is repeated one tier higher
  // (only when precision is Auto).
  double escalate_above = 1e-10;
};

/// Q_a, Q'_a of the C = I recursion together with q.
struct TwinRecursion {
  std::vector<Eigen::MatrixXd> Q;   // Q_0 .. Q_{n-1}
  std::vector<Eigen::MatrixXd> Qp;  // Q'_0 .. Q'_{n-2}
  EvenPolynomial q;
};

TwinRecursion twin_recursion(const Eigen::MatrixXd& J, Precision precision = Precision::Auto);

SpectralRational solve_recursive(const Eigen::MatrixXd& J, const NoiseCovariance& C,
                                 const SolveOptions& opts = {});

SpectralRational solve_recursive(const LtiSystem& sys, const SolveOptions& opts = {});

ResidualReport residuals(const SpectralRational& sr, const Eigen::MatrixXd& J,
                         const NoiseCovariance& C);

Eigen::MatrixXcd evaluate(const SpectralRational& sr, double w);

std::complex<double> evaluate_entry(const SpectralRational& sr, int i, int j, double w);

/// Real/imaginary parts of a rational PSD entry (numerator p + i w pp over q).
/// Uses reversed Horner in 1/w^2 for |w| > 1 to avoid overflow.
std::complex<double> evaluate_rational(const EvenPolynomial& p, const EvenPolynomial& pp,
                                       const EvenPolynomial& q, double w);

}  // namespace ltispec
