#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ltispec/errors.hpp"
#include "ltispec/lti.hpp"

namespace testsupport {

using cd = std::complex<double>;

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd A(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) A(i, j) = nd(rng);
  return A;
}

/// Random J with spectral abscissa in [-1, -0.1].
inline Eigen::MatrixXd random_hurwitz(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> margin(0.1, 1.0);
  Eigen::MatrixXd A = random_matrix(rng, n, n);
  Eigen::EigenSolver<Eigen::MatrixXd> es(A);
  const double abscissa = es.eigenvalues().real().maxCoeff();
  return A - (abscissa + margin(rng)) * Eigen::MatrixXd::Identity(n, n);
}

/// Random symmetric PSD C = B B^T, sometimes rank deficient.
inline Eigen::MatrixXd random_psd(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> rank(1, n);
  const int r = (rng() % 3 == 0) ? rank(rng) : n;
  Eigen::MatrixXd B = random_matrix(rng, n, r);
  return B * B.transpose();
}

inline ltispec::LtiSystem random_system(std::mt19937_64& rng, int n) {
  Eigen::MatrixXd J = random_hurwitz(rng, n);
  Eigen::MatrixXd C = random_psd(rng, n);
  // L = C^{1/2} via the symmetric eigendecomposition, D = 1.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd L = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  return ltispec::LtiSystem(J, L, Eigen::VectorXd::Ones(n));
}

inline double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline double rel(cd a, cd b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// |a - b| / max(|a|, |b|, floor).
inline double rel_floor(double a, double b, double floor) {
  const double s = std::max({std::abs(a), std::abs(b), floor});
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// Entrywise error of S against a reference R, each entry measured against
/// max(|R_ij|, 1e-4 sqrt(R_ii R_jj)).
inline double spectrum_error(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& R) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < R.rows(); ++i)
    for (Eigen::Index j = 0; j < R.cols(); ++j) {
      const double cs = std::sqrt(std::abs(R(i, i).real() * R(j, j).real()));
      const double s = std::max(std::abs(R(i, j)), 1e-4 * cs);
      if (s == 0.0) {
        worst = std::max(worst, std::abs(S(i, j)) > 0 ? 1.0 : 0.0);
        continue;
      }
      worst = std::max(worst, std::abs(S(i, j) - R(i, j)) / s);
    }
  return worst;
}

/// Coefficients c_0..c_deg of the polynomial in x through (x_k, y_k), least
/// squares in long double.
inline std::vector<double> poly_fit(const std::vector<double>& x, const std::vector<double>& y, int deg) {
  using LD = long double;
  using M = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;
  using V = Eigen::Matrix<LD, Eigen::Dynamic, 1>;
  M A(x.size(), deg + 1);
  V b(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    LD p = 1;
    for (int d = 0; d <= deg; ++d) {
      A(k, d) = p;
      p *= x[k];
    }
    b(k) = y[k];
  }
  V c = A.colPivHouseholderQr().solve(b);
  std::vector<double> out(deg + 1);
  for (int d = 0; d <= deg; ++d) out[d] = static_cast<double>(c(d));
  return out;
}

/// det(A + iwI) by complex LU; det of 0x0 is 1.
inline cd cdet_shift(const Eigen::MatrixXd& A, double w) {
  if (A.rows() == 0) return 1.0;
  Eigen::MatrixXcd M = A.cast<cd>();
  M.diagonal().array() += cd(0.0, w);
  return M.partialPivLu().determinant();
}

/// det(A + iwI - iw e_b e_b^T).
inline cd cdet_shift_except(const Eigen::MatrixXd& A, int b, double w) {
  Eigen::MatrixXcd M = A.cast<cd>();
  M.diagonal().array() += cd(0.0, w);
  M(b, b) -= cd(0.0, w);
  return M.partialPivLu().determinant();
}

inline Eigen::MatrixXd drop(const Eigen::MatrixXd& A, int b) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd out(n - 1, n - 1);
  for (int r = 0, rr = 0; r < n; ++r) {
    if (r == b) continue;
    for (int c = 0, cc = 0; c < n; ++c) {
      if (c == b) continue;
      out(rr, cc++) = A(r, c);
    }
    ++rr;
  }
  return out;
}

/// Elementary symmetric polynomials e_0..e_n of the given values.
inline std::vector<cd> esp(const std::vector<cd>& v) {
  std::vector<cd> e(v.size() + 1, 0.0);
  e[0] = 1.0;
  for (const cd& x : v)
    for (std::size_t k = e.size() - 1; k >= 1; --k) e[k] += x * e[k - 1];
  return e;
}

inline std::vector<double> logspace(double a, double b, int count) {
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k)
    out[k] = std::pow(10.0, a + (b - a) * (count == 1 ? 0.0 : double(k) / (count - 1)));
  return out;
}

}  // namespace testsupport
