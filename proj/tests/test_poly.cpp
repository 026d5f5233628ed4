#include <doctest.h>

#include "ltispec/poly.hpp"
#include "support.hpp"

using namespace ltispec;
using namespace testsupport;

namespace {

double cofactor_det(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) return 1.0;
  if (n == 1) return A(0, 0);
  double s = 0.0;
  for (int c = 0; c < n; ++c) {
    Eigen::MatrixXd M(n - 1, n - 1);
    for (int r = 1; r < n; ++r)
      for (int cc = 0, k = 0; cc < n; ++cc)
        if (cc != c) M(r - 1, k++) = A(r, cc);
    s += ((c % 2 == 0) ? 1.0 : -1.0) * A(0, c) * cofactor_det(M);
  }
  return s;
}

Eigen::MatrixXd hessenberg(const std::vector<double>& r) {
  const int k = static_cast<int>(r.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) H(a, b) = -r[b - a];
    if (a + 1 < k) H(a + 1, a) = -(a + 1);
  }
  return H;
}

}  // namespace

TEST_CASE("even polynomial evaluation") {
  CHECK(eval_even(EvenPolynomial({4, 5, 1}), 1.0) == 10.0);
  CHECK(eval_even(EvenPolynomial({1}), 7.0) == 1.0);
  CHECK(eval_even(EvenPolynomial({0, 1}), 2.0) == 4.0);
  CHECK(EvenPolynomial({4, 5, 1})(0.0) == 4.0);
  CHECK(EvenPolynomial(std::vector<double>{}).size() == 1);
}

TEST_CASE("even polynomial arithmetic is coefficient convolution") {
  const EvenPolynomial a({1, 1}), b({4, 1});
  CHECK((a * b) == EvenPolynomial({4, 5, 1}));
  CHECK((a + b) == EvenPolynomial({5, 2}));
  const EvenPolynomial c({1, -2, 3}), d({0.5, 7});
  CHECK((c * d).size() == c.size() + d.size() - 1);
  for (double w : {0.3, 1.1, 2.5}) CHECK((c * d)(w) == doctest::Approx(c(w) * d(w)).epsilon(1e-14));
}

TEST_CASE("trace powers") {
  Eigen::MatrixXd A(1, 1);
  A << -1;
  auto t = trace_powers(A, 2, true);
  CHECK(t.r == std::vector<double>{1, 1});

  Eigen::MatrixXd D = Eigen::Vector2d(1, 2).asDiagonal();
  CHECK(trace_powers(D, 2, true).r == std::vector<double>{5, 17});

  Eigen::MatrixXd B(2, 2);
  B << 0, 1, -2, -3;
  CHECK(trace_powers(B, 3, false).r == std::vector<double>{-3, 5, -9});

  CHECK_THROWS_AS(trace_powers(Eigen::MatrixXd(2, 3), 2, true), DimensionError);
}

TEST_CASE("trace powers match repeated multiplication") {
  std::mt19937_64 rng(11);
  for (int n : {1, 3, 6}) {
    Eigen::MatrixXd A = random_matrix(rng, n, n);
    for (bool sq : {false, true}) {
      auto t = trace_powers(A, 7, sq);
      Eigen::MatrixXd base = sq ? Eigen::MatrixXd(A * A) : A;
      Eigen::MatrixXd P = base;
      for (int k = 1; k <= 7; ++k) {
        CHECK(rel(t.r[k - 1], P.trace()) < 1e-10);
        P = P * base;
      }
    }
  }
}

TEST_CASE("bell hessenberg values") {
  CHECK(bell_hessenberg(std::vector<double>{}) == 1.0);
  CHECK(bell_hessenberg(std::vector<double>{5}) == -5.0);
  CHECK(bell_hessenberg(std::vector<double>{5, 17}) == 8.0);
  // e_2 = (-1)^2/2! * 8 = 4 = 1 * 4
  CHECK(bell_hessenberg(std::vector<double>{5, 17}) / 2.0 == 4.0);
}

TEST_CASE("bell hessenberg equals cofactor determinant on integer inputs") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(-6, 6);
  for (int trial = 0; trial < 50; ++trial) {
    for (int k = 1; k <= 4; ++k) {
      std::vector<double> r(k);
      for (auto& x : r) x = u(rng);
      const double exact = cofactor_det(hessenberg(r));
      CHECK(bell_hessenberg(r) == exact);
    }
  }
}

TEST_CASE("denominator coefficients") {
  Eigen::MatrixXd J = Eigen::Vector2d(-1, -2).asDiagonal();
  auto q = denominator_coeffs(J);
  REQUIRE(q.size() == 3);
  CHECK(q[0] == doctest::Approx(4));
  CHECK(q[1] == doctest::Approx(5));
  CHECK(q[2] == 1.0);

  Eigen::MatrixXd a(1, 1);
  a << -0.7;
  auto q1 = denominator_coeffs(a);
  CHECK(q1[0] == doctest::Approx(0.49));
  CHECK(q1[1] == 1.0);
}

TEST_CASE("denominator matches a fit of |det(J + iwI)|^2") {
  std::mt19937_64 rng(5);
  Eigen::MatrixXd J = random_hurwitz(rng, 5);
  std::vector<double> x, y;
  for (int k = 0; k < 11; ++k) {
    const double w = 0.2 + 0.18 * k;
    x.push_back(w * w);
    y.push_back(std::norm(cdet_shift(J, w)));
  }
  const auto fit = poly_fit(x, y, 5);
  const auto q = denominator_coeffs(J);
  for (int a = 0; a <= 5; ++a) CHECK(rel_floor(q[a], fit[a], 1e-6) < 1e-7);
}

TEST_CASE("q_a is the elementary symmetric polynomial of the squared eigenvalues") {
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::MatrixXd J = random_matrix(rng, n, n);
      Eigen::EigenSolver<Eigen::MatrixXd> es(J);
      std::vector<cd> sq;
      for (int k = 0; k < n; ++k) sq.push_back(es.eigenvalues()(k) * es.eigenvalues()(k));
      const auto e = esp(sq);
      const auto q = denominator_coeffs(J);
      double scale = 0;
      for (int a = 0; a <= n; ++a) scale = std::max(scale, std::abs(q[a]));
      for (int a = 0; a <= n; ++a) CHECK(rel_floor(q[a], e[n - a].real(), 1e-9 * scale) < 1e-9);
    }
  }
}

TEST_CASE("denominator agrees with the trace closed forms") {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::MatrixXd J = random_matrix(rng, n, n);
      const auto t = trace_powers(J, 4, true).r;  // Tr J^2, J^4, J^6, J^8
      const auto q = denominator_coeffs(J);
      CHECK(q[n] == 1.0);
      CHECK(rel(q[n - 1], t[0]) < 1e-10);
      if (n >= 2) CHECK(rel(q[n - 2], (t[0] * t[0] - t[1]) / 2) < 1e-10);
      if (n >= 3) CHECK(rel(q[n - 3], (std::pow(t[0], 3) - 3 * t[0] * t[1] + 2 * t[2]) / 6) < 1e-10);
      if (n >= 4)
        CHECK(rel(q[n - 4], (std::pow(t[0], 4) - 6 * t[0] * t[0] * t[1] + 8 * t[0] * t[2] +
                             3 * t[1] * t[1] - 6 * t[3]) / 24) < 1e-10);
    }
  }
}

TEST_CASE("precision tiers") {
  CHECK(precision_for_dimension(2) == Precision::Quad);
  CHECK(precision_for_dimension(9) == Precision::Quad);
  CHECK(precision_for_dimension(10) == Precision::Mp100);
  CHECK(precision_for_dimension(31) == Precision::Mp100);
  CHECK(precision_for_dimension(40) == Precision::Mp200);
  CHECK(parse_precision("mp200") == Precision::Mp200);
  CHECK_THROWS_AS(parse_precision("float"), ParseError);
}
