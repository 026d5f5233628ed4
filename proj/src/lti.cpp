#include "ltispec/lti.hpp"

#include <cmath>

#include "ltispec/detail/lti_t.hpp"
#include "ltispec/errors.hpp"

namespace ltispec {

LtiSystem::LtiSystem(Eigen::MatrixXd J_, Eigen::MatrixXd L_, Eigen::VectorXd D_,
                     std::vector<std::string> labels_)
    : J(std::move(J_)), L(std::move(L_)), D(std::move(D_)), labels(std::move(labels_)) {
  validate();
}

void LtiSystem::validate() const {
  if (J.rows() != J.cols() || J.rows() == 0)
    throw DimensionError("J must be a non-empty square matrix");
  if (L.rows() != J.rows())
    throw DimensionError("L has " + std::to_string(L.rows()) + " rows, expected " +
                         std::to_string(J.rows()));
  if (D.size() != L.cols())
    throw DimensionError("D has " + std::to_string(D.size()) + " entries, expected " +
                         std::to_string(L.cols()));
  for (Eigen::Index k = 0; k < D.size(); ++k) {
    if (!(D(k) >= 0.0)) throw ParseError("D entry " + std::to_string(k) + " is negative");
  }
  if (!J.allFinite() || !L.allFinite()) throw ParseError("J or L has non-finite entries");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != J.rows())
    throw DimensionError("labels must have one entry per state");
}

NoiseCovariance build_covariance(const LtiSystem& sys) {
  sys.validate();
  Eigen::MatrixXd C = sys.L * sys.D.asDiagonal() * sys.L.transpose();
  return {0.5 * (C + C.transpose())};
}

LdlFactor ldl_reduce(const NoiseCovariance& cov) {
  const Eigen::MatrixXd& C = cov.C;
  if (C.rows() != C.cols()) throw DimensionError("ldl_reduce: C is not square");
  const Eigen::Index n = C.rows();
  const double cnorm = std::max(C.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd D = Eigen::VectorXd::Zero(n);
  // Entry (i, j) of the Schur complement moves by about eps ||C|| (1 + |L_i|)(1 + |L_j|)
  // under perturbations of C, so zero tests are scaled by that and by the cancelled terms.
  auto reduce = [&](Eigen::Index i, Eigen::Index j, double& mag) {
    double v = C(i, j);
    mag = std::abs(C(i, j));
    for (Eigen::Index k = 0; k < j; ++k) {
      const double t = L(i, k) * L(j, k) * D(k);
      v -= t;
      mag += std::abs(t);
    }
    const double gi = 1 + L.row(i).head(j).lpNorm<1>(), gj = 1 + L.row(j).head(j).lpNorm<1>();
    mag = std::max({mag, cnorm * gi * gj});
    return v;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    double mag = 0;
    const double d = reduce(j, j, mag);
    const double tol = 1e-12 * mag;
    if (d < -tol) throw NumericalError("ldl_reduce: covariance is indefinite");
    if (d <= tol) {
      D(j) = 0.0;
      for (Eigen::Index i = j + 1; i < n; ++i) {
        const double v = reduce(i, j, mag);
        if (std::abs(v) > 1e-12 * mag)
          throw NumericalError("ldl_reduce: zero pivot with nonzero column");
      }
      continue;
    }
    D(j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) L(i, j) = reduce(i, j, mag) / d;
  }
  return {L, D};
}

std::vector<double> faddeev_leverrier(const Eigen::MatrixXd& J, Precision precision) {
  if (J.rows() != J.cols()) throw DimensionError("faddeev_leverrier: J is not square");
  const int n = static_cast<int>(J.rows());
  return detail::with_scalar(resolve_precision(precision, n), [&]<class T>(T) {
    return detail::to_double(detail::faddeev_leverrier_t<T>(detail::cast_matrix<T>(J)));
  });
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Stable:
      return "stable";
    case Stability::Unstable:
      return "unstable";
    case Stability::Marginal:
      return "marginal";
  }
  return "unknown";
}

RouthReport routh_hurwitz(const std::vector<double>& charpoly, double rel_tol) {
  if (charpoly.empty()) throw DimensionError("routh_hurwitz: empty polynomial");
  return detail::routh_t<double>(charpoly, rel_tol);
}

RouthReport hurwitz_report(const Eigen::MatrixXd& J, Precision precision) {
  if (J.rows() != J.cols()) throw DimensionError("hurwitz_check: J is not square");
  const int n = static_cast<int>(J.rows());
  return detail::with_scalar(resolve_precision(precision, n), [&]<class T>(T) {
    return detail::routh_t<T>(detail::faddeev_leverrier_t<T>(detail::cast_matrix<T>(J)), 1e-10);
  });
}

Stability hurwitz_check(const Eigen::MatrixXd& J, Precision precision) {
  return hurwitz_report(J, precision).verdict;
}

}  // namespace ltispec
