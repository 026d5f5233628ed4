#include "ltispec/recursive.hpp"

#include <cmath>

#include "ltispec/detail/recursive_t.hpp"
#include "ltispec/errors.hpp"

namespace ltispec {

namespace {

void check_inputs(const Eigen::MatrixXd& J, const Eigen::MatrixXd& C) {
  if (J.rows() != J.cols() || J.rows() == 0) throw DimensionError("J must be square and non-empty");
  if (C.rows() != J.rows() || C.cols() != J.cols())
    throw DimensionError("C must match the dimension of J");
}

void require_stable(const Eigen::MatrixXd& J, bool allow_marginal) {
  const Stability s = hurwitz_check(J);
  if (s == Stability::Unstable) throw StabilityError("J is not Hurwitz");
  if (s == Stability::Marginal && !allow_marginal)
    throw StabilityError("J is marginally stable (Routh pivot below tolerance)");
}

template <class T>
SpectralRational pack(const detail::RecursionT<T>& rec, Precision p) {
  SpectralRational sr;
  sr.n = static_cast<int>(rec.P.size());
  for (const auto& M : rec.P) sr.P.push_back(detail::to_double(M));
  for (const auto& M : rec.Pp) sr.Pp.push_back(detail::to_double(M));
  sr.q = EvenPolynomial(detail::to_double(rec.q));
  sr.precision = p;
  return sr;
}

}  // namespace

EvenPolynomial SpectralRational::real_part(int i, int j) const {
  std::vector<double> c(P.size());
  for (std::size_t a = 0; a < P.size(); ++a) c[a] = P[a](i, j);
  return EvenPolynomial(std::move(c));
}

EvenPolynomial SpectralRational::imag_part(int i, int j) const {
  std::vector<double> c(Pp.size());
  for (std::size_t a = 0; a < Pp.size(); ++a) c[a] = Pp[a](i, j);
  return EvenPolynomial(std::move(c));
}

TwinRecursion twin_recursion(const Eigen::MatrixXd& J, Precision precision) {
  check_inputs(J, J);
  const int n = static_cast<int>(J.rows());
  return detail::with_scalar(resolve_precision(precision, n), [&]<class T>(T) {
    const detail::Mat<T> Jt = detail::cast_matrix<T>(J);
    const auto rec = detail::sweep<T>(Jt, detail::Mat<T>::Identity(n, n), {});
    TwinRecursion out;
    for (const auto& M : rec.P) out.Q.push_back(detail::to_double(M));
    for (const auto& M : rec.Pp) out.Qp.push_back(detail::to_double(M));
    out.q = EvenPolynomial(detail::to_double(rec.q));
    return out;
  });
}

SpectralRational solve_recursive(const Eigen::MatrixXd& J, const NoiseCovariance& C,
                                 const SolveOptions& opts) {
  check_inputs(J, C.C);
  if (opts.check_stability) require_stable(J, opts.allow_marginal);
  const int n = static_cast<int>(J.rows());
  Precision p = resolve_precision(opts.precision, n);
  for (;;) {
    bool healthy = true;
    SpectralRational sr = detail::with_scalar(p, [&]<class T>(T) {
      const detail::Mat<T> Jt = detail::cast_matrix<T>(J);
      const detail::Mat<T> Ct = detail::cast_matrix<T>(C.C);
      const auto rec = detail::solve_recursive_t<T>(Jt, Ct);
      const detail::Mat<T> Pp0 =
          rec.Pp.empty() ? detail::Mat<T>::Zero(n, n) : rec.Pp.front();
      const auto res = detail::residuals_t<T>(Jt, Ct, rec.P.front(), Pp0, rec.q.front());
      const double rel1 = static_cast<double>(res.scale1 > T(0) ? T(res.r1 / res.scale1) : res.r1);
      const double rel2 = static_cast<double>(res.scale2 > T(0) ? T(res.r2 / res.scale2) : res.r2);
      healthy = std::isfinite(rel1) && std::isfinite(rel2) && rel1 <= opts.escalate_above &&
                rel2 <= opts.escalate_above;
      return pack<T>(rec, p);
    });
    if (healthy || opts.precision != Precision::Auto || p == Precision::Mp400) {
      for (const auto& M : sr.P)
        if (!M.allFinite()) throw NumericalError("recursive solve produced non-finite coefficients");
      return sr;
    }
    p = next_precision(p);
  }
}

SpectralRational solve_recursive(const LtiSystem& sys, const SolveOptions& opts) {
  return solve_recursive(sys.J, build_covariance(sys), opts);
}

ResidualReport residuals(const SpectralRational& sr, const Eigen::MatrixXd& J,
                         const NoiseCovariance& C) {
  check_inputs(J, C.C);
  if (sr.n != J.rows()) throw DimensionError("residuals: dimension mismatch");
  const int n = sr.n;
  const Precision p = resolve_precision(sr.precision, n);
  return detail::with_scalar(p, [&]<class T>(T) {
    const detail::Mat<T> Pp0 = sr.Pp.empty() ? detail::Mat<T>::Zero(n, n)
                                             : detail::cast_matrix<T>(sr.Pp.front());
    const auto res = detail::residuals_t<T>(detail::cast_matrix<T>(J), detail::cast_matrix<T>(C.C),
                                            detail::cast_matrix<T>(sr.P.front()), Pp0, T(sr.q[0]));
    return ResidualReport{static_cast<double>(res.r1), static_cast<double>(res.r2),
                          static_cast<double>(res.scale1), static_cast<double>(res.scale2)};
  });
}

std::complex<double> evaluate_rational(const EvenPolynomial& p, const EvenPolynomial& pp,
                                       const EvenPolynomial& q, double w) {
  const std::size_t N = q.size() - 1;
  const double w2 = w * w;
  if (w2 <= 1.0) {
    const double den = eval_even(q, w);
    return {eval_even(p, w) / den, w * eval_even(pp, w) / den};
  }
  // Everything divided by w^{2N}: sum c_a u^{N-a}, u = 1/w^2.
  const double u = 1.0 / w2;
  auto reversed = [&](const EvenPolynomial& c) {
    double acc = 0.0;
    for (std::size_t a = 0; a < c.size(); ++a) acc = acc * u + c[a];
    // acc = sum c_a u^{size-1-a}; shift to u^{N-a}
    return acc * std::pow(u, static_cast<double>(N + 1 - c.size()));
  };
  const double den = reversed(q);
  return {reversed(p) / den, w * reversed(pp) / den};
}

std::complex<double> evaluate_entry(const SpectralRational& sr, int i, int j, double w) {
  return evaluate_rational(sr.real_part(i, j), sr.imag_part(i, j), sr.q, w);
}

Eigen::MatrixXcd evaluate(const SpectralRational& sr, double w) {
  const int n = sr.n;
  Eigen::MatrixXcd S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S(i, j) = evaluate_entry(sr, i, j, w);
  return S;
}

}  // namespace ltispec
