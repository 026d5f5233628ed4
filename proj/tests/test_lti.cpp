#include <doctest.h>

#include "ltispec/errors.hpp"
#include "ltispec/lti.hpp"
#include "ltispec/poly.hpp"
#include "support.hpp"

using namespace ltispec;
using namespace testsupport;

TEST_CASE("build_covariance") {
  {
    LtiSystem s(-Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1, 4));
    CHECK(build_covariance(s).C.isApprox(Eigen::MatrixXd(Eigen::Vector2d(1, 4).asDiagonal())));
  }
  {
    const double we = -0.401665, sigma = 1e-3;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(2, 2);
    L(1, 1) = we;
    LtiSystem s(-Eigen::MatrixXd::Identity(2, 2), L, Eigen::Vector2d(sigma * sigma, sigma * sigma));
    const auto C = build_covariance(s).C;
    CHECK(C(0, 0) == 0.0);
    CHECK(C(0, 1) == 0.0);
    CHECK(C(1, 1) == doctest::Approx(sigma * sigma * we * we));
  }
  {
    Eigen::MatrixXd L(2, 1);
    L << 1, 1;
    LtiSystem s(-Eigen::MatrixXd::Identity(2, 2), L, Eigen::VectorXd::Ones(1));
    CHECK(build_covariance(s).C == Eigen::MatrixXd::Ones(2, 2));
  }
}

TEST_CASE("system validation") {
  CHECK_THROWS_AS(LtiSystem(Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Identity(2, 2),
                            Eigen::VectorXd::Ones(2)),
                  DimensionError);
  CHECK_THROWS_AS(LtiSystem(-Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(3, 2),
                            Eigen::VectorXd::Ones(2)),
                  DimensionError);
  CHECK_THROWS_AS(LtiSystem(-Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2),
                            Eigen::VectorXd::Ones(3)),
                  DimensionError);
  CHECK_THROWS_AS(LtiSystem(-Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2),
                            Eigen::Vector2d(1, -1)),
                  ParseError);
}

TEST_CASE("ldl_reduce") {
  {
    Eigen::MatrixXd C(2, 2);
    C << 4, 2, 2, 2;
    auto f = ldl_reduce({C});
    Eigen::MatrixXd L(2, 2);
    L << 1, 0, 0.5, 1;
    CHECK(f.L.isApprox(L));
    CHECK(f.D.isApprox(Eigen::Vector2d(4, 1)));
  }
  {
    Eigen::MatrixXd C = Eigen::Vector3d(3, 0, 7).asDiagonal();
    auto f = ldl_reduce({C});
    CHECK(f.L == Eigen::MatrixXd::Identity(3, 3));
    CHECK(f.D == Eigen::Vector3d(3, 0, 7));
  }
  {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::MatrixXd A = random_matrix(rng, 6, 6);
      Eigen::MatrixXd C = A * A.transpose();
      auto f = ldl_reduce({C});
      CHECK((f.L * f.D.asDiagonal() * f.L.transpose() - C).norm() <= 1e-12 * C.norm());
      CHECK(f.D.minCoeff() >= 0.0);
    }
  }
  {
    std::mt19937_64 rng(5);
    double worst = 0;
    for (int n = 2; n <= 8; ++n)
      for (int r = 1; r < n; ++r)
        for (int trial = 0; trial < 30; ++trial) {
          Eigen::MatrixXd B = random_matrix(rng, n, r);
          Eigen::MatrixXd C = B * B.transpose();
          auto f = ldl_reduce({C});
          worst = std::max(worst, (f.L * f.D.asDiagonal() * f.L.transpose() - C).norm() / C.norm());
          CHECK(f.D.minCoeff() >= 0.0);
          CHECK((f.D.array() > 0).count() <= r);
        }
    MESSAGE("rank-deficient round trip ", worst);
    CHECK(worst <= 1e-10);
  }
  {
    Eigen::MatrixXd C(2, 2);
    C << 1, 2, 2, 1;
    CHECK_THROWS_AS(ldl_reduce({C}), NumericalError);
  }
  {
    Eigen::MatrixXd C(2, 2);
    C << 0, 1, 1, 1;
    CHECK_THROWS_AS(ldl_reduce({C}), NumericalError);
  }
}

TEST_CASE("faddeev_leverrier") {
  Eigen::MatrixXd J(2, 2);
  J << 0, 1, -2, -3;
  auto c = faddeev_leverrier(J);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == 1.0);
  CHECK(c[1] == doctest::Approx(3));
  CHECK(c[2] == doctest::Approx(2));
  auto c3 = faddeev_leverrier(-Eigen::MatrixXd::Identity(3, 3));
  CHECK(c3[1] == doctest::Approx(3));
  CHECK(c3[2] == doctest::Approx(3));
  CHECK(c3[3] == doctest::Approx(1));

  std::mt19937_64 rng(2);
  Eigen::MatrixXd A = random_matrix(rng, 5, 5);
  CHECK(rel(faddeev_leverrier(A)[5], -A.determinant()) < 1e-12);
}

TEST_CASE("hurwitz_check") {
  Eigen::MatrixXd J(2, 2);
  J << 0, 1, -2, -3;
  CHECK(hurwitz_check(J) == Stability::Stable);
  J << 0, 1, -2, 1;
  CHECK(hurwitz_check(J) == Stability::Unstable);
  J << 0, 1, -1, 0;
  CHECK(hurwitz_check(J) == Stability::Marginal);
  CHECK(hurwitz_check(Eigen::MatrixXd::Identity(3, 3)) == Stability::Unstable);
}

TEST_CASE("hurwitz_check agrees with eigenvalue real parts") {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::MatrixXd J = random_matrix(rng, n, n) - 0.5 * Eigen::MatrixXd::Identity(n, n);
      Eigen::EigenSolver<Eigen::MatrixXd> es(J);
      const double abscissa = es.eigenvalues().real().maxCoeff();
      if (std::abs(abscissa) < 1e-3) continue;
      const Stability expect = abscissa < 0 ? Stability::Stable : Stability::Unstable;
      CHECK(hurwitz_check(J) == expect);
    }
  }
}

TEST_CASE("hurwitz_check on large and near-marginal systems") {
  std::mt19937_64 rng(6);
  for (int n : {12, 24, 32, 40}) {
    Eigen::MatrixXd J = random_hurwitz(rng, n);
    const auto rep = hurwitz_report(J);
    INFO("n=", n, " min_rel=", rep.min_relative_pivot, " pivots=", rep.pivots.size());
    CHECK(rep.verdict == Stability::Stable);
    Eigen::EigenSolver<Eigen::MatrixXd> es(J);
    const double abscissa = es.eigenvalues().real().maxCoeff();
    J -= (abscissa - 0.05) * Eigen::MatrixXd::Identity(n, n);
    CHECK(hurwitz_check(J) == Stability::Unstable);
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(4, 4);
  J.topLeftCorner(2, 2) << -1e-13, 1, -1, -1e-13;
  J.bottomRightCorner(2, 2) << -1, 0, 0, -2;
  CHECK(hurwitz_check(J) == Stability::Marginal);
  J(0, 0) = J(1, 1) = -1e-3;
  CHECK(hurwitz_check(J) == Stability::Stable);
  Eigen::MatrixXd Z = -Eigen::MatrixXd::Identity(3, 3);
  Z(2, 2) = 0;
  CHECK(hurwitz_check(Z) == Stability::Marginal);
}

TEST_CASE("q_0 equals det(J)^2") {
  std::mt19937_64 rng(6);
  for (int n = 1; n <= 8; ++n) {
    Eigen::MatrixXd J = random_hurwitz(rng, n);
    const double d = J.determinant();
    CHECK(rel(denominator_coeffs(J)[0], d * d) < 1e-9);
  }
}
