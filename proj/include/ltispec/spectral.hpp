#pragma once

#include <Eigen/Core>

#include "ltispec/lti.hpp"
#include "ltispec/recursive.hpp"

namespace ltispec {

struct SpectrumMatrix {
  double w = 0;  // angular frequency
  Eigen::MatrixXcd S;
};

/// S(w) = (iwI + J)^{-1} C (-iwI + J)^{-T} by two LU solves.
SpectrumMatrix matrix_oracle(const LtiSystem& sys, double w);
SpectrumMatrix matrix_oracle(const Eigen::MatrixXd& J, const NoiseCovariance& C, double w);

/// |S_ij|^2 / (S_ii S_jj).
double coherence(const SpectrumMatrix& S, int i, int j);

/// Sigma with J Sigma + Sigma J^T + C = 0 (Kronecker form, dense LU).
Eigen::MatrixXd stationary_covariance(const Eigen::MatrixXd& J, const NoiseCovariance& C);

struct QuadratureConfig {
  int panels_per_decade = 4;
  double rel_tol = 1e-10;
  int max_depth = 16;
};

struct PsdIntegral {
  Eigen::MatrixXd Sigma;  // int S(w) dw / 2pi
  double error_estimate = 0;
  bool converged = true;
};

PsdIntegral integrate_psd(const SpectralRational& sr, const Eigen::MatrixXd& J,
                          const QuadratureConfig& cfg = {});

}  // namespace ltispec
