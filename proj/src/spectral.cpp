#include "ltispec/spectral.hpp"

#include <Eigen/LU>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "ltispec/errors.hpp"

namespace ltispec {

SpectrumMatrix matrix_oracle(const Eigen::MatrixXd& J, const NoiseCovariance& C, double w) {
  if (J.rows() != J.cols() || C.C.rows() != J.rows() || C.C.cols() != J.cols())
    throw DimensionError("matrix_oracle: dimension mismatch");
  const Eigen::Index n = J.rows();
  const std::complex<double> iw(0.0, w);
  const Eigen::MatrixXcd Jc = J.cast<std::complex<double>>();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  Eigen::PartialPivLU<Eigen::MatrixXcd> left(Jc + iw * I);
  Eigen::PartialPivLU<Eigen::MatrixXcd> right(Jc - iw * I);
  if (!(left.rcond() >= 1e-15) || !(right.rcond() >= 1e-15))
    throw NumericalError("matrix_oracle: shifted matrix is singular (resonance)");
  const Eigen::MatrixXcd X = left.solve(C.C.cast<std::complex<double>>());
  // S (J - iwI)^T = X  <=>  (J - iwI) S^T = X^T
  const Eigen::MatrixXcd St = right.solve(X.transpose());
  return {w, St.transpose()};
}

SpectrumMatrix matrix_oracle(const LtiSystem& sys, double w) {
  return matrix_oracle(sys.J, build_covariance(sys), w);
}

double coherence(const SpectrumMatrix& S, int i, int j) {
  const Eigen::Index n = S.S.rows();
  if (i < 0 || j < 0 || i >= n || j >= n) throw ParseError("coherence: index out of range");
  const double sii = S.S(i, i).real(), sjj = S.S(j, j).real();
  if (!(sii > 0.0) || !(sjj > 0.0)) throw NumericalError("coherence: zero auto-spectrum");
  const double k = std::norm(S.S(i, j)) / (sii * sjj);
  if (k < -1e-12 || k > 1.0 + 1e-12) throw NumericalError("coherence outside [0, 1]");
  return std::clamp(k, 0.0, 1.0);
}

Eigen::MatrixXd stationary_covariance(const Eigen::MatrixXd& J, const NoiseCovariance& C) {
  const Eigen::Index n = J.rows();
  if (J.cols() != n || C.C.rows() != n || C.C.cols() != n)
    throw DimensionError("stationary_covariance: dimension mismatch");
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  // vec(J S + S J^T) = (I kron J + J kron I) vec(S)
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      K.block(a * n, b * n, n, n) += I(a, b) * J;
      K.block(a * n, b * n, n, n) += J(a, b) * I;
    }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
  if (!(lu.rcond() >= 1e-15)) throw NumericalError("stationary_covariance: J is marginal");
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(C.C.data(), n * n);
  const Eigen::VectorXd x = lu.solve(rhs);
  Eigen::MatrixXd S = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
  return 0.5 * (S + S.transpose());
}

namespace {

using Gauss = boost::math::quadrature::gauss<double, 20>;

// Gauss-Legendre on [a, b] of Re S(w); the symmetric rule uses the stored
// nonnegative abscissae.
Eigen::MatrixXd panel(const SpectralRational& sr, double a, double b) {
  const auto& x = Gauss::abscissa();
  const auto& wt = Gauss::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(sr.n, sr.n);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == 0.0) {
      sum += wt[k] * evaluate(sr, c).real();
    } else {
      sum += wt[k] * (evaluate(sr, c + h * x[k]).real() + evaluate(sr, c - h * x[k]).real());
    }
  }
  return h * sum;
}

struct Adaptive {
  const SpectralRational& sr;
  double abs_tol;
  int max_depth;
  double err = 0;
  bool ok = true;

  Eigen::MatrixXd run(double a, double b, const Eigen::MatrixXd& whole, int depth) {
    const double m = 0.5 * (a + b);
    Eigen::MatrixXd left = panel(sr, a, m), right = panel(sr, m, b);
    Eigen::MatrixXd both = left + right;
    const double diff = (both - whole).norm();
    if (diff <= abs_tol || depth >= max_depth) {
      if (diff > abs_tol) ok = false;
      err += diff;
      return both;
    }
    return run(a, m, left, depth + 1) + run(m, b, right, depth + 1);
  }
};

}  // namespace

PsdIntegral integrate_psd(const SpectralRational& sr, const Eigen::MatrixXd& J,
                          const QuadratureConfig& cfg) {
  const int n = sr.n;
  if (J.rows() != n) throw DimensionError("integrate_psd: dimension mismatch");
  const double rho = std::max(1.0, J.cwiseAbs().rowwise().sum().maxCoeff());
  const double big = 1e3 * rho;
  // smallest natural scale: geometric mean of |lambda| per eigenvalue, bounded below
  const double lo = 1e-4 * std::min(1.0, std::pow(std::abs(sr.q[0]), 1.0 / (2.0 * n)));
  std::vector<double> edges{0.0, lo};
  const int decades = static_cast<int>(std::ceil(std::log10(big / lo)));
  const int panels = std::max(1, decades * cfg.panels_per_decade);
  for (int k = 1; k <= panels; ++k) edges.push_back(lo * std::pow(big / lo, double(k) / panels));

  // Absolute tolerance from a coarse pass.
  Eigen::MatrixXd coarse = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::MatrixXd> pieces;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    pieces.push_back(panel(sr, edges[k], edges[k + 1]));
    coarse += pieces.back();
  }
  Adaptive ad{sr, cfg.rel_tol * coarse.norm() / static_cast<double>(pieces.size()), cfg.max_depth};
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k)
    total += ad.run(edges[k], edges[k + 1], pieces[k], 0);

  // Tail: S ~ P_{n-1}/w^2 + (P_{n-2} - q_{n-1} P_{n-1})/w^4.
  Eigen::MatrixXd tail = sr.P[n - 1] / big;
  Eigen::MatrixXd second = -sr.q[n - 1] * sr.P[n - 1];
  if (n >= 2) second += sr.P[n - 2];
  tail += second / (3.0 * big * big * big);
  total += tail;

  const double pi = boost::math::constants::pi<double>();
  PsdIntegral out;
  out.Sigma = total / pi;  // (1/2pi) * 2 * int_0^inf Re S
  out.error_estimate = ad.err / pi;
  out.converged = ad.ok;
  return out;
}

}  // namespace ltispec
