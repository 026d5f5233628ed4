// Acceptance runner: one PASS/FAIL line per criterion.

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ltispec/elementwise.hpp"
#include "ltispec/errors.hpp"
#include "ltispec/models.hpp"
#include "ltispec/recursive.hpp"
#include "ltispec/sim.hpp"
#include "ltispec/spectral.hpp"

using namespace ltispec;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> logspace(double a, double b, int count) {
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = std::pow(10.0, a + (b - a) * double(k) / (count - 1));
  return out;
}

double rel(cd a, cd b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Entry (i, j) of S against reference R, floored at 1e-4 sqrt(R_ii R_jj).
double entry_error(cd s, const Eigen::MatrixXcd& R, int i, int j) {
  const double floor = 1e-4 * std::sqrt(std::abs(R(i, i).real() * R(j, j).real()));
  const double scale = std::max(std::abs(R(i, j)), floor);
  return scale == 0.0 ? std::abs(s) : std::abs(s - R(i, j)) / scale;
}

double matrix_error(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& R) {
  double worst = 0;
  for (int i = 0; i < R.rows(); ++i)
    for (int j = 0; j < R.cols(); ++j) worst = std::max(worst, entry_error(S(i, j), R, i, j));
  return worst;
}

double max_abs(const EvenPolynomial& p) {
  double m = 0;
  for (double c : p.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

// Coefficientwise difference over max(largest coefficient of either, floor).
double poly_diff(const EvenPolynomial& a, const EvenPolynomial& b, double floor) {
  const std::size_t k = std::max(a.size(), b.size());
  const double s = std::max({max_abs(a), max_abs(b), floor});
  if (s == 0.0) return 0.0;
  double worst = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double x = i < a.size() ? a[i] : 0.0, y = i < b.size() ? b[i] : 0.0;
    worst = std::max(worst, std::abs(x - y) / s);
  }
  return worst;
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd A(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) A(i, j) = nd(rng);
  return A;
}

Eigen::MatrixXd random_hurwitz(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> margin(0.1, 1.0);
  Eigen::MatrixXd A = random_matrix(rng, n, n);
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  return A - (es.eigenvalues().real().maxCoeff() + margin(rng)) * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd random_psd(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> rank(1, n);
  const int r = (rng() % 3 == 0) ? rank(rng) : n;
  Eigen::MatrixXd B = random_matrix(rng, n, r);
  return B * B.transpose();
}

LtiSystem system_from_covariance(const Eigen::MatrixXd& J, const Eigen::MatrixXd& C) {
  LdlFactor f = ldl_reduce({C});
  return LtiSystem(J, f.L, f.D);
}

double asym(const Eigen::MatrixXd& A, double sign) {
  const double s = A.cwiseAbs().maxCoeff();
  return s == 0.0 ? 0.0 : (A - sign * A.transpose()).cwiseAbs().maxCoeff() / s;
}

// Shared by criteria 3, 4 and 6.
struct Sweep {
  bool done = false;
  double coeff = 0, rec_oracle = 0, elem_oracle = 0, residual = 0, symmetry = 0;
  int systems = 0;
  double seconds = 0;
};

Sweep& sweep() {
  static Sweep s;
  if (s.done) return s;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240611);
  const auto ws = logspace(-2, 2, 21);
  for (int n = 2; n <= 8; ++n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) pairs.emplace_back(i, j);
    for (int k = 0; k < 200; ++k) {
      const Eigen::MatrixXd J = random_hurwitz(rng, n);
      const Eigen::MatrixXd C = random_psd(rng, n);
      const LtiSystem sys = system_from_covariance(J, C);
      const NoiseCovariance cov{C};
      const SpectralRational sr = solve_recursive(J, cov);
      const auto batch = element_coeffs_batch(sys, pairs);
      const EvenPolynomial q = denominator_coeffs(J);

      double pscale = 0;
      for (const auto& P : sr.P) pscale = std::max(pscale, P.cwiseAbs().maxCoeff());
      for (std::size_t b = 0; b < pairs.size(); ++b) {
        const auto [i, j] = pairs[b];
        s.coeff = std::max(s.coeff, poly_diff(batch[b].p, sr.real_part(i, j), 1e-12 * pscale));
        s.coeff = std::max(s.coeff, poly_diff(batch[b].pp, sr.imag_part(i, j), 1e-12 * pscale));
      }
      for (double w : ws) {
        const Eigen::MatrixXcd R = matrix_oracle(J, cov, w).S;
        s.rec_oracle = std::max(s.rec_oracle, matrix_error(evaluate(sr, w), R));
        for (std::size_t b = 0; b < pairs.size(); ++b) {
          const auto [i, j] = pairs[b];
          const cd v = evaluate_rational(batch[b].p, batch[b].pp, q, w);
          s.elem_oracle = std::max(s.elem_oracle, entry_error(v, R, i, j));
        }
      }
      const ResidualReport res = residuals(sr, J, cov);
      s.residual = std::max({s.residual, res.relative1(), res.relative2()});
      for (const auto& P : sr.P) s.symmetry = std::max(s.symmetry, asym(P, 1.0));
      for (const auto& P : sr.Pp) s.symmetry = std::max(s.symmetry, asym(P, -1.0));
      ++s.systems;
    }
  }
  s.seconds = seconds_since(t0);
  s.done = true;
  return s;
}

struct FhnCase {
  double I = 0.265, alpha = 0.7, beta = 0.75, eps = 0.08, sigma = 1e-3;
};

Outcome criterion1() {
  const auto t0 = Clock::now();
  FhnCase c;
  ModelSpec m = fhn_model({{"I", c.I}, {"alpha", c.alpha}, {"beta", c.beta}, {"eps", c.eps}, {"sigma", c.sigma}});
  const FixedPoint fp = find_fixed_point(m);
  const LtiSystem sys = linearize(m, fp);
  const SpectralRational sr = solve_recursive(sys);
  const ElementCoeffs ec = auto_coeffs(sys, 0);
  const EvenPolynomial q = denominator_coeffs(sys.J);
  const double ve = fp.x(0), we = fp.x(1);
  const double q0 = std::pow(c.eps + (ve * ve - 1) * c.beta * c.eps, 2);
  const double q1 = std::pow(ve * ve - 1, 2) - 2 * c.eps + c.beta * c.beta * c.eps * c.eps;
  double worst = 0;
  for (double w : logspace(-3, 1, 50)) {
    const double closed = we * we * c.sigma * c.sigma / (q0 + q1 * w * w + std::pow(w, 4));
    const cd r = evaluate_entry(sr, 0, 0, w);
    const cd e = evaluate_rational(ec.p, ec.pp, q, w);
    worst = std::max({worst, rel(r, closed), rel(e, closed), rel(r, e)});
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-10 && t < 1.0, fmt("max rel err %.2e over 50 freqs, %.3f s", worst, t)};
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  const double b = 0.5, mu = 0.01, s = 4, sig = 1e-3;
  ModelSpec m = hindmarsh_rose_model({{"I", 5.5}, {"b", b}, {"mu", mu}, {"s", s}});
  const FixedPoint fp = find_fixed_point(m);
  const LtiSystem sys = linearize(m, fp);
  const double xe = fp.x(0), k = 3 * xe - 2 * b;
  const double q0 = mu * mu * std::pow(xe * (k + 10) + s, 2);
  const double q1 = mu * mu * (std::pow(xe * k + s, 2) - 20 * xe + 1) + xe * xe * std::pow(k + 10, 2) -
                    2 * mu * s + 20 * mu * s * xe;
  const double q2 = xe * (xe * k * k - 20) + mu * mu - 2 * mu * s + 1;
  const EvenPolynomial q = denominator_coeffs(sys.J);
  const ElementCoeffs ec = auto_coeffs(sys, 0);
  const SpectralRational sr = solve_recursive(sys);
  const double want_p[3] = {mu * mu * sig * sig, (mu * mu + 1) * sig * sig, sig * sig};
  double worst = std::max({rel(q[0], q0), rel(q[1], q1), rel(q[2], q2), rel(q[3], 1.0)});
  for (int a = 0; a < 3; ++a) {
    worst = std::max(worst, rel(ec.p[a], want_p[a]));
    worst = std::max(worst, rel(sr.P[a](0, 0), want_p[a]));
    worst = std::max(worst, rel(sr.q[a], q[a]));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-10 && t < 1.0, fmt("x_e=%.6f, max rel err %.2e, %.3f s", xe, worst, t)};
}

Outcome criterion3() {
  const Sweep& s = sweep();
  const bool ok = s.coeff <= 1e-8 && s.rec_oracle <= 1e-8 && s.elem_oracle <= 1e-8 && s.seconds < 300;
  return {ok, fmt("%d systems, coeff %.2e, recursive/oracle %.2e, element/oracle %.2e, %.1f s", s.systems,
                  s.coeff, s.rec_oracle, s.elem_oracle, s.seconds)};
}

Outcome criterion4() {
  const Sweep& s = sweep();
  return {s.residual <= 1e-8, fmt("%d systems, max relative residual %.2e", s.systems, s.residual)};
}

Outcome criterion5() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + k % 6;
    const Eigen::MatrixXd J = random_hurwitz(rng, n);
    const NoiseCovariance cov{random_psd(rng, n)};
    const SpectralRational sr = solve_recursive(J, cov);
    const Eigen::MatrixXd Sigma = stationary_covariance(J, cov);
    const PsdIntegral in = integrate_psd(sr, J);
    worst = std::max(worst, (in.Sigma - Sigma).norm() / Sigma.norm());
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-6 && t < 120, fmt("50 systems, max rel Frobenius err %.2e, %.2f s", worst, t)};
}

Outcome criterion6() {
  const Sweep& s = sweep();
  return {s.symmetry <= 1e-10, fmt("%d systems, max relative (anti)symmetry defect %.2e", s.systems, s.symmetry)};
}

Outcome criterion7() {
  std::mt19937_64 rng(99);
  double worst = 0;
  int count = 0;
  for (int n = 1; n <= 8; ++n)
    for (int k = 0; k < 50; ++k) {
      const Eigen::MatrixXd J = random_hurwitz(rng, n);
      const EvenPolynomial q = denominator_coeffs(J);
      const auto t = trace_powers(J, 4, true).r;
      const double t0 = t[0], t1 = t[1], t2 = t[2], t3 = t[3];
      const double f[4] = {t0, (t0 * t0 - t1) / 2, (t0 * t0 * t0 - 3 * t0 * t1 + 2 * t2) / 6,
                           (std::pow(t0, 4) - 6 * t0 * t0 * t1 + 8 * t0 * t2 + 3 * t1 * t1 - 6 * t3) / 24};
      for (int a = 1; a <= std::min(n, 4); ++a) worst = std::max(worst, rel(q[n - a], f[a - 1]));
      ++count;
    }
  return {worst <= 1e-10, fmt("%d systems n<=8, max rel err %.2e", count, worst)};
}

struct LargeCheck {
  double worst = 0;
  std::string detail;
};

LargeCheck large_model(const ModelSpec& m, int i, int j) {
  const FixedPoint fp = find_fixed_point(m);
  const LtiSystem sys = linearize(m, fp);
  const SpectralRational sr = solve_recursive(sys);
  const ElementCoeffs ea = auto_coeffs(sys, i);
  const ElementCoeffs ex = cross_coeffs(sys, i, j);
  const EvenPolynomial q = denominator_coeffs(sys.J);
  Eigen::EigenSolver<Eigen::MatrixXd> es(sys.J, false);
  const auto mag = es.eigenvalues().cwiseAbs();
  const auto ws = logspace(std::log10(0.01 * mag.minCoeff()), std::log10(100 * mag.maxCoeff()), 100);
  double worst = 0;
  for (double w : ws) {
    const Eigen::MatrixXcd R = matrix_oracle(sys, w).S;
    worst = std::max(worst, matrix_error(evaluate(sr, w), R));
    worst = std::max(worst, entry_error(evaluate_rational(ea.p, ea.pp, q, w), R, i, i));
    worst = std::max(worst, entry_error(evaluate_rational(ex.p, ex.pp, q, w), R, i, j));
  }
  return {worst, fmt("%s n=%d (%s) %.2e", m.name.c_str(), sys.n(), to_string(sr.precision).c_str(), worst)};
}

Outcome criterion8() {
  const auto t0 = Clock::now();
  const LargeCheck rps = large_model(rps_model({{"n", 31}, {"mu", 5e-4}}), 0, 1);
  ModelSpec ssn = ssn_model();
  const int N = ssn.n / 2, centre = N / 2;
  const LargeCheck net = large_model(ssn, centre, N + centre);
  const double t = seconds_since(t0);
  const bool ok = rps.worst <= 1e-7 && net.worst <= 1e-7 && t < 60;
  return {ok, rps.detail + ", " + net.detail + fmt(", 100 freqs each, %.1f s", t)};
}

// Welch estimate against the analytic spectrum over the middle two decades of
// the resolvable band [1/(N dt), 1/(2 dt)].
struct WelchCheck {
  double median_log = 0;
  double coherence_mae = -1;
  int segments = 0, bins = 0;
};

WelchCheck welch_check(const SdeSystem& sde, const LtiSystem& lin, const Eigen::VectorXd& x0, double dt,
                       int stride, int var, int coh_j, std::uint64_t seed) {
  WelchConfig wc;
  const int target = 201;
  const double sample_dt = dt * stride;
  Eigen::EigenSolver<Eigen::MatrixXd> es(lin.J, false);
  const double slowest = es.eigenvalues().real().cwiseAbs().minCoeff();
  SimConfig cfg;
  cfg.dt = dt;
  cfg.stride = stride;
  cfg.seed = seed;
  cfg.x0 = x0;
  cfg.burn_in = 10.0 / slowest;
  const double hop = wc.segment_length / 2;
  cfg.t_total = cfg.burn_in + sample_dt * (wc.segment_length + hop * (target - 1) + 1);
  const Trajectory traj = simulate(sde, cfg);

  std::vector<std::pair<int, int>> pairs{{var, var}};
  if (coh_j >= 0) {
    pairs.emplace_back(coh_j, coh_j);
    pairs.emplace_back(var, coh_j);
  }
  const SpectrumEstimate est = welch_spectrum(traj, pairs, wc);
  const double f1 = 1.0 / (wc.segment_length * sample_dt), fn = 0.5 / sample_dt;
  const double fc = std::sqrt(f1 * fn);
  const Eigen::VectorXcd& Sv = est.at(var, var);
  Eigen::VectorXd K;
  if (coh_j >= 0) K = coherence_estimate(est, var, coh_j);

  std::vector<double> logs;
  double mae = 0;
  for (std::size_t b = 0; b < est.freqs.size(); ++b) {
    const double f = est.freqs[b];
    if (f < fc / 10 || f > fc * 10) continue;
    const SpectrumMatrix S = matrix_oracle(lin, 2 * std::numbers::pi * f);
    logs.push_back(std::abs(std::log10(Sv(b).real() / S.S(var, var).real())));
    if (coh_j >= 0) mae += std::abs(K(b) - coherence(S, var, coh_j));
  }
  WelchCheck out;
  out.bins = static_cast<int>(logs.size());
  out.segments = est.n_segments;
  std::nth_element(logs.begin(), logs.begin() + logs.size() / 2, logs.end());
  out.median_log = logs[logs.size() / 2];
  if (coh_j >= 0) out.coherence_mae = mae / out.bins;
  return out;
}

Outcome criterion9() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  auto record = [&](const std::string& name, const WelchCheck& w) {
    ok = ok && w.segments >= 200 && w.median_log <= 0.05 && w.coherence_mae <= 0.05;  // -1 when not checked
    detail += fmt("%s median|log10|=%.3f", name.c_str(), w.median_log);
    if (w.coherence_mae >= 0) detail += fmt(" coh MAE=%.3f", w.coherence_mae);
    detail += fmt(" (%d seg, %d bins); ", w.segments, w.bins);
  };

  {
    const double a = 1.0, sigma = 1.0;
    Eigen::MatrixXd J(1, 1), L(1, 1);
    J << -a;
    L << sigma;
    const LtiSystem lin(J, L, Eigen::VectorXd::Ones(1));
    SdeSystem sde;
    sde.n = sde.m = 1;
    sde.additive = true;
    sde.drift = [a](const Eigen::VectorXd& x, Eigen::VectorXd& out) { out = -a * x; };
    sde.dispersion = [L](const Eigen::VectorXd&, Eigen::MatrixXd& out) { out = L; };
    auto w = welch_check(sde, lin, Eigen::VectorXd::Zero(1), 1e-3, 10, 0, -1, 1);
    record("OU", w);
  }
  for (const char* name : {"fhn", "hr", "wc4"}) {
    const ModelSpec m = make_model(name);
    const FixedPoint fp = find_fixed_point(m);
    const LtiSystem lin = linearize(m, fp);
    const bool wc4 = std::string(name) == "wc4";
    auto w = welch_check(m.sde(), lin, fp.x, m.sim_dt, m.sim_stride, 0, wc4 ? 1 : -1, 2);
    record(name, w);
  }
  const double t = seconds_since(t0);
  ok = ok && t < 600;
  return {ok, detail + fmt("%.1f s", t)};
}

Outcome criterion10() {
  ModelSpec m = ssn_model();
  const FixedPoint fp = find_fixed_point(m);
  const LtiSystem sys = linearize(m, fp);
  const Stability st = hurwitz_check(sys.J);
  Eigen::EigenSolver<Eigen::MatrixXd> es(sys.J, false);
  // Most oscillatory eigenvalue; a pair counts when |Im| >= 0.1 |Re|.
  cd pair(-1, 0);
  for (const cd& l : es.eigenvalues())
    if (std::abs(l.imag() / l.real()) > std::abs(pair.imag() / pair.real())) pair = l;
  const bool oscillatory = std::abs(pair.imag()) >= 0.1 * std::abs(pair.real());
  const bool ok = st == Stability::Stable && oscillatory && pair.real() < 0;
  return {ok, fmt("SSN Hurwitz=%s, damped pair %.4f +/- %.4fi; figure curves not reproduced, checked by property",
                  st == Stability::Stable ? "yes" : "no", pair.real(), std::abs(pair.imag()))};
}

Outcome criterion11() {
  std::mt19937_64 rng(11);
  auto timed = [&](int n) {
    double total = 0;
    for (int k = 0; k < 5; ++k) {
      const Eigen::MatrixXd J = random_hurwitz(rng, n);
      const NoiseCovariance cov{random_psd(rng, n)};
      const auto t0 = Clock::now();
      const SpectralRational sr = solve_recursive(J, cov);
      total += seconds_since(t0);
      if (sr.n != n) throw NumericalError("unexpected size");
    }
    return total / 5;
  };
  timed(16);  // warm-up
  const double t16 = timed(16), t32 = timed(32);
  const double ratio = t32 / t16;
  return {ratio <= 24, fmt("t(16)=%.4f s, t(32)=%.4f s, ratio %.2f", t16, t32, ratio)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ltispec acceptance checks"};
  std::vector<int> only;
  app.add_option("--only", only, "criteria to run (default all)")->delimiter(',')->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> all{
      {"FHN closed form", criterion1},
      {"Hindmarsh-Rose coefficients", criterion2},
      {"cross-method sweep", criterion3},
      {"redundant-identity residuals", criterion4},
      {"Lyapunov identity", criterion5},
      {"coefficient symmetry", criterion6},
      {"denominator trace forms", criterion7},
      {"large-n validation", criterion8},
      {"simulation consistency", criterion9},
      {"SSN regime (property-based)", criterion10},
      {"complexity guard", criterion11},
  };
  const std::set<int> chosen(only.begin(), only.end());
  int failed = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!chosen.empty() && !chosen.count(id)) continue;
    Outcome o;
    try {
      o = all[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, all[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
