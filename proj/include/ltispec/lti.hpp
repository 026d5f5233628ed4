#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "ltispec/precision.hpp"

namespace ltispec {

/// dx = J x dt + L dW with E[dW dW^T] = D dt, D diagonal.
struct LtiSystem {
  Eigen::MatrixXd J;
  Eigen::MatrixXd L;
  Eigen::VectorXd D;  // diagonal of the diffusion matrix
  std::vector<std::string> labels;

  LtiSystem() = default;
  LtiSystem(Eigen::MatrixXd J_, Eigen::MatrixXd L_, Eigen::VectorXd D_,
            std::vector<std::string> labels_ = {});

  int n() const { return static_cast<int>(J.rows()); }
  int m() const { return static_cast<int>(L.cols()); }

  // Throws DimensionError / ParseError on inconsistent shapes or negative D.
  void validate() const;
};

struct NoiseCovariance {
  Eigen::MatrixXd C;
};

NoiseCovariance build_covariance(const LtiSystem& sys);

struct LdlFactor {
  Eigen::MatrixXd L;  // unit lower triangular
  Eigen::VectorXd D;  // nonnegative pivots
};

/// C = L D L^T with zero pivots skipped; throws NumericalError if C is indefinite.
LdlFactor ldl_reduce(const NoiseCovariance& cov);

/// Monic coefficients of det(sI - J), highest power first.
std::vector<double> faddeev_leverrier(const Eigen::MatrixXd& J, Precision precision = Precision::Auto);

enum class Stability { Stable, Unstable, Marginal };

std::string to_string(Stability s);

struct RouthReport {
  Stability verdict = Stability::Stable;
  std::vector<double> pivots;      // first column of the Routh table, balanced variable
  double min_relative_pivot = 0;   // min |pivot| / row scale
};

/// Routh-Hurwitz on a characteristic polynomial (highest power first).
/// Pivots below rel_tol times the row scale make the verdict Marginal.
RouthReport routh_hurwitz(const std::vector<double>& charpoly, double rel_tol = 1e-10);

RouthReport hurwitz_report(const Eigen::MatrixXd& J, Precision precision = Precision::Auto);

Stability hurwitz_check(const Eigen::MatrixXd& J, Precision precision = Precision::Auto);

}  // namespace ltispec
