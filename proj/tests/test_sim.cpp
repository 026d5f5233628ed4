#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <sstream>

#include "ltispec/errors.hpp"
#include "ltispec/sim.hpp"
#include "ltispec/spectral.hpp"
#include "support.hpp"

using namespace ltispec;
using namespace testsupport;

namespace {

SdeSystem linear_sde(const Eigen::MatrixXd& J, const Eigen::MatrixXd& L) {
  SdeSystem s;
  s.n = static_cast<int>(J.rows());
  s.m = static_cast<int>(L.cols());
  s.drift = [J](const Eigen::VectorXd& x, Eigen::VectorXd& out) { out.noalias() = J * x; };
  s.dispersion = [L](const Eigen::VectorXd&, Eigen::MatrixXd& out) { out = L; };
  s.additive = true;
  return s;
}

SdeSystem ou(double a, double sigma) {
  return linear_sde(Eigen::MatrixXd::Constant(1, 1, -a), Eigen::MatrixXd::Constant(1, 1, sigma));
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("noise-free linear decay follows Euler exactly") {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_total = 5;
  cfg.x0 = Eigen::VectorXd::Ones(1);
  auto traj = simulate(ou(1.0, 0.0), cfg);
  REQUIRE(traj.samples() == 5000);
  CHECK(traj.X(0, 0) == 1.0);
  CHECK(traj.X(4999, 0) == doctest::Approx(std::pow(1 - 1e-3, 4999)).epsilon(1e-12));
  CHECK(std::abs(traj.X(4999, 0) * (1 - 1e-3)) < 0.01);
}

TEST_CASE("OU stationary variance") {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_total = 2000;
  cfg.burn_in = 10;
  cfg.stride = 10;
  cfg.x0 = Eigen::VectorXd::Zero(1);
  double var = 0;
  const int seeds = 3;
  for (int s = 0; s < seeds; ++s) {
    cfg.seed = derive_seed(5, s);
    auto traj = simulate(ou(1.0, 1.0), cfg);
    const double mean = traj.X.col(0).mean();
    var += (traj.X.col(0).array() - mean).square().mean() / seeds;
  }
  CHECK(var > 0.45);
  CHECK(var < 0.55);
}

TEST_CASE("fixed seed gives identical trajectories") {
  SimConfig cfg;
  cfg.t_total = 3;
  cfg.x0 = Eigen::VectorXd::Zero(1);
  cfg.seed = 7;
  auto a = simulate(ou(1, 1), cfg), b = simulate(ou(1, 1), cfg);
  CHECK(a.X == b.X);
  cfg.seed = 8;
  CHECK(simulate(ou(1, 1), cfg).X != a.X);

  auto ens = simulate_ensemble(ou(1, 1), cfg, 4, 3);
  auto ens1 = simulate_ensemble(ou(1, 1), cfg, 4, 1);
  for (int k = 0; k < 4; ++k) CHECK(ens[k].X == ens1[k].X);
  CHECK(ens[0].X != ens[1].X);
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("blow-up reports the step") {
  SdeSystem s;
  s.n = s.m = 1;
  s.drift = [](const Eigen::VectorXd& x, Eigen::VectorXd& out) { out(0) = x(0) * x(0); };
  s.dispersion = [](const Eigen::VectorXd&, Eigen::MatrixXd& out) { out.setZero(1, 1); };
  SimConfig cfg;
  cfg.dt = 0.1;
  cfg.t_total = 100;
  cfg.x0 = Eigen::VectorXd::Constant(1, 10.0);
  try {
    simulate(s, cfg);
    FAIL("expected a blow-up");
  } catch (const SimulationError& e) {
    CHECK(e.step() > 0);
    CHECK(e.step() < 1000);
  }
}

TEST_CASE("configuration errors") {
  SimConfig cfg;
  cfg.x0 = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(simulate(ou(1, 1), cfg), DimensionError);
  cfg.x0 = Eigen::VectorXd::Zero(1);
  cfg.burn_in = 5;
  CHECK_THROWS_AS(simulate(ou(1, 1), cfg), ParseError);
  cfg.burn_in = 0;
  cfg.dt = -1;
  CHECK_THROWS_AS(simulate(ou(1, 1), cfg), ParseError);
}

TEST_CASE("white noise has a flat density at its variance") {
  Trajectory traj;
  traj.dt = 1.0;
  std::mt19937_64 rng(3);
  traj.X = random_matrix(rng, 1 << 17, 1);
  WelchConfig w;
  w.segment_length = 1024;
  auto est = welch_spectrum(traj, {{0, 0}}, w);
  CHECK(est.n_segments == 255);
  const auto& S = est.at(0, 0);
  for (std::size_t b = 50; b < 450; b += 25) {
    CHECK(S(b).real() == doctest::Approx(1.0).epsilon(0.15));
    CHECK(S(b).imag() == 0.0);
  }
}

TEST_CASE("Welch on a simulated OU matches the rational spectrum") {
  const double a = 1.0, sigma = 1.0;
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.stride = 10;
  cfg.x0 = Eigen::VectorXd::Zero(1);
  WelchConfig w;
  w.segment_length = 4096;
  cfg.t_total = 0.01 * 2048 * 203;
  cfg.seed = 11;
  auto traj = simulate(ou(a, sigma), cfg);
  auto est = welch_spectrum(traj, {{0, 0}}, w);
  CHECK(est.n_segments >= 200);
  std::vector<double> dev;
  for (std::size_t b = 1; b < est.freqs.size(); ++b) {
    const double om = 2 * std::numbers::pi * est.freqs[b];
    if (om < 0.1 || om > 10) continue;
    dev.push_back(std::abs(std::log10(est.at(0, 0)(b).real() * (a * a + om * om) / (sigma * sigma))));
  }
  CHECK(dev.size() > 50);
  CHECK(median(dev) < 0.05);
}

TEST_CASE("cross-spectrum phase follows the analytic convention") {
  Eigen::MatrixXd J(2, 2);
  J << -1.0, 2.0, -2.0, -0.5;
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(2, 2);
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.stride = 10;
  cfg.x0 = Eigen::VectorXd::Zero(2);
  cfg.t_total = 0.01 * 1024 * 401;
  cfg.seed = 13;
  auto traj = simulate(linear_sde(J, L), cfg);
  WelchConfig w;
  w.segment_length = 2048;
  auto est = welch_spectrum(traj, {{0, 0}, {1, 1}, {0, 1}}, w);
  int checked = 0;
  double err = 0;
  for (std::size_t b = 1; b < est.freqs.size(); ++b) {
    const double om = 2 * std::numbers::pi * est.freqs[b];
    if (om < 0.5 || om > 4) continue;
    const cd ref = matrix_oracle(J, {L * L.transpose()}, om).S(0, 1);
    err += std::abs(est.at(0, 1)(b) - ref) / std::abs(ref);
    ++checked;
  }
  REQUIRE(checked > 10);
  CHECK(err / checked < 0.15);
  auto K = coherence_estimate(est, 0, 1);
  CHECK((K.array() >= 0).all());
  CHECK((K.array() <= 1).all());
}

TEST_CASE("sinusoid peaks at its bin") {
  const int N = 1 << 15;
  Trajectory traj;
  traj.dt = 0.01;
  traj.X.resize(N, 1);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0, 1e-3);
  const double f0 = 3.0;
  for (int k = 0; k < N; ++k) traj.X(k, 0) = std::sin(2 * std::numbers::pi * f0 * k * traj.dt) + nd(rng);
  WelchConfig w;
  w.segment_length = 2048;
  auto est = welch_spectrum(traj, {{0, 0}}, w);
  Eigen::Index peak;
  est.at(0, 0).real().maxCoeff(&peak);
  CHECK(std::abs(est.freqs[peak] - f0) <= 1.0 / (w.segment_length * traj.dt));
}

TEST_CASE("coherence of copies and of independent channels") {
  std::mt19937_64 rng(9);
  Trajectory traj;
  traj.dt = 1;
  traj.X = random_matrix(rng, 1 << 16, 3);
  traj.X.col(1) = traj.X.col(0);
  WelchConfig w;
  w.segment_length = 512;
  auto est = welch_spectrum(traj, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}}, w);
  auto same = coherence_estimate(est, 0, 1);
  CHECK(same.segment(1, 200).minCoeff() > 1 - 1e-9);
  auto indep = coherence_estimate(est, 0, 2);
  CHECK(indep.segment(1, 250).mean() <= 3 * 2.0 / est.n_segments);

  SpectrumEstimate one = est;
  one.n_segments = 1;
  CHECK_THROWS_AS(coherence_estimate(one, 0, 1), NumericalError);
  CHECK_THROWS(coherence_estimate(est, 1, 2));
}

TEST_CASE("short trajectories are refused") {
  Trajectory traj;
  traj.dt = 1;
  traj.X = Eigen::MatrixXd::Zero(1000, 1);
  WelchConfig w;
  w.segment_length = 256;
  CHECK(welch_segment_count(1000, w) == 6);
  CHECK_THROWS_AS(welch_spectrum(traj, {{0, 0}}, w), DimensionError);
}

TEST_CASE("trajectory CSV round trip") {
  SimConfig cfg;
  cfg.t_total = 0.05;
  cfg.x0 = Eigen::VectorXd::Zero(2);
  cfg.seed = 99;
  auto traj = simulate(linear_sde(-Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)), cfg);
  traj.model_id = "ou2";
  std::stringstream ss;
  write_trajectory_csv(ss, traj, {"a", "b"});
  auto back = read_trajectory_csv(ss);
  CHECK(back.X == traj.X);
  CHECK(back.dt == traj.dt);
  CHECK(back.seed == 99);
  CHECK(back.model_id == "ou2");
}
