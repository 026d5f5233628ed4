#include <doctest.h>

#include <boost/math/special_functions/binomial.hpp>

#include "ltispec/errors.hpp"
#include "ltispec/recursive.hpp"
#include "ltispec/spectral.hpp"
#include "support.hpp"

using namespace ltispec;
using namespace testsupport;

namespace {

struct Fhn {
  double I = 0.265, alpha = 0.7, beta = 0.75, eps = 0.08, sigma = 1e-3;
  double ve = -1.00125, we = -0.401665;
  Eigen::MatrixXd J() const {
    Eigen::MatrixXd j(2, 2);
    j << 1 - ve * ve, -1, eps, -beta * eps;
    return j;
  }
  Eigen::MatrixXd C() const {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
    c(1, 1) = sigma * sigma * we * we;
    return c;
  }
  // Printed closed form of S_v: w_e^2 sigma^2 / (q0 + q1 w^2 + w^4)
  double closed(double w) const {
    const double q0 = std::pow(eps + (ve * ve - 1) * beta * eps, 2);
    const double q1 = std::pow(ve * ve - 1, 2) - 2 * eps + beta * beta * eps * eps;
    return we * we * sigma * sigma / (q0 + q1 * w * w + std::pow(w, 4));
  }
};

}  // namespace

TEST_CASE("OU process") {
  const double a = 0.8, c = 1.3;
  Eigen::MatrixXd J(1, 1), C(1, 1);
  J << -a;
  C << c * c;
  auto sr = solve_recursive(J, {C});
  REQUIRE(sr.P.size() == 1);
  CHECK(sr.Pp.empty());
  CHECK(sr.P[0](0, 0) == doctest::Approx(c * c));
  CHECK(sr.q[0] == doctest::Approx(a * a));
  CHECK(sr.q[1] == 1.0);
  CHECK(evaluate(sr, 0.0)(0, 0).real() == doctest::Approx(c * c / (a * a)));
  CHECK(evaluate(sr, 2.0)(0, 0).real() == doctest::Approx(c * c / (a * a + 4)));
  auto res = residuals(sr, J, {C});
  CHECK(res.r1 == doctest::Approx(0.0));
  CHECK(res.r2 <= 1e-15);
}

TEST_CASE("FHN recursion reproduces the printed coefficients") {
  Fhn f;
  auto sr = solve_recursive(f.J(), {f.C()});
  const double q0 = std::pow(f.eps + (f.ve * f.ve - 1) * f.beta * f.eps, 2);
  const double q1 = std::pow(f.ve * f.ve - 1, 2) - 2 * f.eps + f.beta * f.beta * f.eps * f.eps;
  CHECK(rel(sr.q[0], q0) < 1e-12);
  CHECK(rel(sr.q[1], q1) < 1e-12);
  CHECK(sr.q[2] == 1.0);
  CHECK(rel(sr.P[0](0, 0), f.we * f.we * f.sigma * f.sigma) < 1e-12);
  CHECK(std::abs(sr.P[1](0, 0)) < 1e-30);
  for (double w : logspace(-3, 1, 25)) CHECK(rel(evaluate(sr, w)(0, 0).real(), f.closed(w)) < 1e-12);
  CHECK(rel(evaluate(sr, 0)(0, 0).real(), f.we * f.we * f.sigma * f.sigma / q0) < 1e-12);
  auto res = residuals(sr, f.J(), {f.C()});
  CHECK(res.relative1() <= 1e-12);
  CHECK(res.relative2() <= 1e-12);
}

TEST_CASE("J = -I, C = I gives binomial coefficients") {
  for (int n = 1; n <= 6; ++n) {
    Eigen::MatrixXd J = -Eigen::MatrixXd::Identity(n, n), C = Eigen::MatrixXd::Identity(n, n);
    auto sr = solve_recursive(J, {C});
    for (int a = 0; a < n; ++a) {
      const double b = boost::math::binomial_coefficient<double>(n - 1, a);
      CHECK((sr.P[a] - b * C).norm() < 1e-12);
    }
    for (const auto& Pp : sr.Pp) CHECK(Pp.norm() < 1e-12);
    for (int a = 0; a <= n; ++a)
      CHECK(sr.q[a] == doctest::Approx(boost::math::binomial_coefficient<double>(n, a)));
    for (double w : {0.0, 0.3, 1.0, 2.0, 7.0}) {
      CHECK(spectrum_error(evaluate(sr, w), matrix_oracle(J, {C}, w).S) < 1e-12);
      CHECK(evaluate(sr, w)(0, 0).real() == doctest::Approx(1.0 / (1 + w * w)));
    }
  }
}

TEST_CASE("random systems: oracle, symmetry, residuals") {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 6; ++trial) {
      Eigen::MatrixXd J = random_hurwitz(rng, n), C = random_psd(rng, n);
      auto sr = solve_recursive(J, {C});
      for (const auto& P : sr.P) CHECK((P - P.transpose()).norm() <= 1e-10 * P.norm());
      for (const auto& Pp : sr.Pp) CHECK((Pp + Pp.transpose()).norm() <= 1e-10 * Pp.norm());
      for (double w : logspace(-2, 2, 21)) CHECK(spectrum_error(evaluate(sr, w), matrix_oracle(J, {C}, w).S) < 1e-8);
      auto res = residuals(sr, J, {C});
      CHECK(res.relative1() <= 1e-8);
      CHECK(res.relative2() <= 1e-8);
    }
  }
}

TEST_CASE("twin recursion equals solve with C = I and q equals the Bell route") {
  std::mt19937_64 rng(19);
  for (int n = 1; n <= 7; ++n) {
    Eigen::MatrixXd J = random_hurwitz(rng, n);
    auto tw = twin_recursion(J);
    auto sr = solve_recursive(J, {Eigen::MatrixXd::Identity(n, n)});
    for (int a = 0; a < n; ++a) CHECK((tw.Q[a] - sr.P[a]).norm() <= 1e-12 * sr.P[a].norm());
    for (int a = 0; a + 1 < n; ++a) CHECK((tw.Qp[a] - sr.Pp[a]).norm() <= 1e-12 * std::max(1.0, sr.Pp[a].norm()));
    auto q = denominator_coeffs(J);
    for (int a = 0; a <= n; ++a) CHECK(rel(tw.q[a], q[a]) < 1e-9);
  }
}

TEST_CASE("trace identity: sum 2w/(w^2 + l^2) = Q'(w)/Q(w)") {
  std::mt19937_64 rng(23);
  for (int n = 1; n <= 4; ++n) {
    Eigen::MatrixXd J = random_hurwitz(rng, n);
    Eigen::EigenSolver<Eigen::MatrixXd> es(J);
    auto sr = solve_recursive(J, {Eigen::MatrixXd::Identity(n, n)});
    for (double w : {0.1, 0.7, 2.3}) {
      cd lhs = 0;
      for (int k = 0; k < n; ++k) lhs += 2 * w / (w * w + es.eigenvalues()(k) * es.eigenvalues()(k));
      double dq = 0, q = 0;
      for (int a = 0; a <= n; ++a) {
        q += sr.q[a] * std::pow(w, 2 * a);
        if (a > 0) dq += 2 * a * sr.q[a] * std::pow(w, 2 * a - 1);
      }
      CHECK(std::abs(lhs.imag()) < 1e-10 * std::abs(lhs));
      CHECK(rel(lhs.real(), dq / q) < 1e-9);
    }
  }
}

TEST_CASE("non-Hurwitz input is refused") {
  Eigen::MatrixXd J(2, 2);
  J << 0, 1, -2, 1;
  CHECK_THROWS_AS(solve_recursive(J, {Eigen::MatrixXd::Identity(2, 2)}), StabilityError);
  J << 0, 1, -1, 0;
  CHECK_THROWS_AS(solve_recursive(J, {Eigen::MatrixXd::Identity(2, 2)}), StabilityError);
  SolveOptions opts;
  opts.allow_marginal = true;
  CHECK_NOTHROW(solve_recursive(J, {Eigen::MatrixXd::Identity(2, 2)}, opts));
  CHECK_THROWS_AS(solve_recursive(J, {Eigen::MatrixXd::Identity(3, 3)}), DimensionError);
}

TEST_CASE("double precision loses the large systems") {
  // Documents why the solver runs in extended precision: a 24-state chain
  // with widely separated rates fails the residual check in double.
  const int n = 24;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    J(k, k) = -0.01 * (k + 1);
    if (k + 1 < n) J(k, k + 1) = 1.0;
    if (k > 0) J(k, k - 1) = -1.0;
  }
  NoiseCovariance C{Eigen::MatrixXd::Identity(n, n)};
  SolveOptions dbl;
  dbl.precision = Precision::Double;
  dbl.check_stability = false;
  auto bad = solve_recursive(J, C, dbl);
  auto good = solve_recursive(J, C);
  const double w = 0.5;
  const auto ref = matrix_oracle(J, C, w).S;
  CHECK(spectrum_error(evaluate(good, w), ref) < 1e-8);
  CHECK(spectrum_error(evaluate(bad, w), ref) > 1e-6);
}

TEST_CASE("large-argument evaluation does not overflow") {
  std::mt19937_64 rng(29);
  Eigen::MatrixXd J = random_hurwitz(rng, 8), C = random_psd(rng, 8);
  auto sr = solve_recursive(J, {C});
  for (double w : {1e3, 1e6, 1e9}) {
    auto S = evaluate(sr, w);
    CHECK(S.allFinite());
    CHECK(spectrum_error(S, matrix_oracle(J, {C}, w).S) < 1e-8);
  }
}
