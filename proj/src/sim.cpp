#include "ltispec/sim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <complex>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "ltispec/errors.hpp"

namespace ltispec {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

long long steps_for(double t, double dt) { return std::llround(t / dt); }

}  // namespace

void SimConfig::validate(int n) const {
  if (!(dt > 0) || !std::isfinite(dt)) throw ParseError("dt must be positive");
  if (!(t_total > 0)) throw ParseError("t_total must be positive");
  if (burn_in < 0 || burn_in >= t_total) throw ParseError("burn_in must lie in [0, t_total)");
  if (stride < 1) throw ParseError("stride must be at least 1");
  if (x0.size() != n) throw DimensionError("x0 has " + std::to_string(x0.size()) + " entries, expected " + std::to_string(n));
}

void WelchConfig::validate() const {
  if (segment_length < 2) throw ParseError("segment_length must be at least 2");
  if (!(overlap_fraction >= 0 && overlap_fraction < 1)) throw ParseError("overlap_fraction must lie in [0, 1)");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
  return splitmix64(splitmix64(seed) + k);
}

Trajectory simulate(const SdeSystem& sys, const SimConfig& cfg) {
  const int n = sys.n, m = sys.m;
  cfg.validate(n);
  if (!sys.drift || !sys.dispersion) throw ParseError("system needs drift and dispersion");
  Eigen::VectorXd scale = sys.D.size() ? Eigen::VectorXd(sys.D) : Eigen::VectorXd::Ones(m);
  if (scale.size() != m) throw DimensionError("D length does not match m");
  if ((scale.array() < 0).any()) throw ParseError("negative noise variance");
  scale = (scale * cfg.dt).cwiseSqrt();

  const long long total = steps_for(cfg.t_total, cfg.dt);
  const long long burn = steps_for(cfg.burn_in, cfg.dt);
  const long long samples = (total - burn) / cfg.stride;
  if (samples < 1) throw ParseError("run too short to record a sample");

  Trajectory traj;
  traj.dt = cfg.dt * cfg.stride;
  traj.seed = cfg.seed;
  traj.X.resize(samples, n);

  boost::random::mt19937_64 gen(splitmix64(cfg.seed));
  boost::random::normal_distribution<double> normal(0.0, 1.0);

  Eigen::VectorXd x = cfg.x0, f(n), xi(m);
  Eigen::MatrixXd L(n, m);
  sys.dispersion(x, L);
  long long rec = 0;
  for (long long k = 0; k < burn + samples * cfg.stride; ++k) {
    if (k >= burn && (k - burn) % cfg.stride == 0) traj.X.row(rec++) = x.transpose();
    sys.drift(x, f);
    if (!sys.additive) sys.dispersion(x, L);
    for (int c = 0; c < m; ++c) xi(c) = normal(gen) * scale(c);
    x += f * cfg.dt + L * xi;
    if (!x.allFinite()) {
      std::ostringstream msg;
      msg << "state became non-finite at step " << k + 1;
      throw SimulationError(msg.str(), k + 1);
    }
  }
  return traj;
}

std::vector<Trajectory> simulate_ensemble(const SdeSystem& sys, const SimConfig& cfg, int count,
                                          int threads) {
  std::vector<Trajectory> out(count);
  if (count <= 0) return out;
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  std::vector<std::exception_ptr> errors(count);
  auto work = [&](int first) {
    for (int k = first; k < count; k += threads) {
      SimConfig c = cfg;
      c.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(k));
      try {
        out[k] = simulate(sys, c);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& labels) {
  os << std::setprecision(17);
  os << "# dt=" << traj.dt << "\n# seed=" << traj.seed << "\n# model=" << traj.model_id << "\n# rng="
     << kRngName << "\nt";
  for (int k = 0; k < traj.n(); ++k)
    os << ',' << (k < static_cast<int>(labels.size()) ? labels[k] : "x" + std::to_string(k + 1));
  os << '\n';
  for (Eigen::Index r = 0; r < traj.samples(); ++r) {
    os << traj.dt * static_cast<double>(r);
    for (int k = 0; k < traj.n(); ++k) os << ',' << traj.X(r, k);
    os << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  Trajectory traj;
  std::string line;
  std::vector<std::vector<double>> rows;
  int cols = -1;
  long long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2), val = line.substr(eq + 1);
      if (key == "dt") traj.dt = std::stod(val);
      else if (key == "seed") traj.seed = std::stoull(val);
      else if (key == "model") traj.model_id = val;
      continue;
    }
    if (cols < 0) {
      cols = static_cast<int>(std::count(line.begin(), line.end(), ','));
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      if (first) {
        first = false;
        continue;
      }
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("trajectory line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (static_cast<int>(row.size()) != cols)
      throw ParseError("trajectory line " + std::to_string(lineno) + ": expected " + std::to_string(cols) + " values");
    rows.push_back(std::move(row));
  }
  if (cols < 0) throw ParseError("trajectory has no header");
  traj.X.resize(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < cols; ++c) traj.X(static_cast<Eigen::Index>(r), c) = rows[r][c];
  return traj;
}

const Eigen::VectorXcd& SpectrumEstimate::at(int i, int j) const {
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (pairs[k] == std::make_pair(i, j)) return S_hat[k];
  throw ParseError("pair (" + std::to_string(i) + "," + std::to_string(j) + ") not estimated");
}

bool SpectrumEstimate::has(int i, int j) const {
  return std::find(pairs.begin(), pairs.end(), std::make_pair(i, j)) != pairs.end();
}

int welch_segment_count(Eigen::Index samples, const WelchConfig& cfg) {
  const int N = cfg.segment_length;
  const int hop = std::max(1, N - static_cast<int>(std::lround(cfg.overlap_fraction * N)));
  if (samples < N) return 0;
  return static_cast<int>((samples - N) / hop + 1);
}

SpectrumEstimate welch_spectrum(const Trajectory& traj, const std::vector<std::pair<int, int>>& pairs,
                                const WelchConfig& cfg) {
  cfg.validate();
  const int N = cfg.segment_length;
  const int hop = std::max(1, N - static_cast<int>(std::lround(cfg.overlap_fraction * N)));
  const int segments = welch_segment_count(traj.samples(), cfg);
  if (segments < 8)
    throw DimensionError("trajectory of " + std::to_string(traj.samples()) + " samples gives " +
                         std::to_string(segments) + " segments, need at least 8");
  if (!(traj.dt > 0)) throw ParseError("trajectory dt must be positive");

  std::map<int, int> slot;
  for (auto [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= traj.n() || j >= traj.n())
      throw ParseError("pair (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    slot.emplace(i, 0);
    slot.emplace(j, 0);
  }
  int s = 0;
  for (auto& kv : slot) kv.second = s++;

  std::vector<double> window(N, 1.0);
  if (cfg.window == Window::Hann)
    for (int k = 0; k < N; ++k) window[k] = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * k / N);
  double wsum2 = 0;
  for (double w : window) wsum2 += w * w;

  const int bins = N / 2 + 1;
  double* in = fftw_alloc_real(N);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(N, in, out, FFTW_ESTIMATE);
  }

  using cd = std::complex<double>;
  Eigen::MatrixXcd X(bins, static_cast<Eigen::Index>(slot.size()));
  std::vector<Eigen::VectorXcd> acc(pairs.size(), Eigen::VectorXcd::Zero(bins));
  for (int seg = 0; seg < segments; ++seg) {
    const Eigen::Index start = static_cast<Eigen::Index>(seg) * hop;
    for (auto [var, col] : slot) {
      const auto x = traj.X.col(var).segment(start, N);
      const double mean = cfg.detrend ? x.mean() : 0.0;
      for (int k = 0; k < N; ++k) in[k] = (x(k) - mean) * window[k];
      fftw_execute(plan);
      for (int b = 0; b < bins; ++b) X(b, col) = cd(out[b][0], out[b][1]);
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const int a = slot[pairs[p].first], b = slot[pairs[p].second];
      acc[p].array() += X.col(a).conjugate().array() * X.col(b).array();
    }
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);

  SpectrumEstimate est;
  est.pairs = pairs;
  est.n_segments = segments;
  est.freqs.resize(bins);
  for (int b = 0; b < bins; ++b) est.freqs[b] = b / (N * traj.dt);
  const double norm = traj.dt / (wsum2 * segments);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    est.S_hat.push_back(acc[p] * norm);
    if (pairs[p].first == pairs[p].second)
      est.S_hat.back() = est.S_hat.back().real().cast<cd>();
  }
  return est;
}

Eigen::VectorXd coherence_estimate(const SpectrumEstimate& est, int i, int j) {
  if (est.n_segments < 2) throw NumericalError("coherence needs at least 2 segments");
  const auto& sii = est.at(i, i);
  const auto& sjj = est.at(j, j);
  const auto& sij = est.has(i, j) ? est.at(i, j) : est.at(j, i);
  Eigen::VectorXd k(sij.size());
  for (Eigen::Index b = 0; b < sij.size(); ++b) {
    const double den = std::abs(sii(b).real()) * std::abs(sjj(b).real());
    k(b) = den > 0 ? std::min(1.0, std::norm(sij(b)) / den) : 0.0;
  }
  return k;
}

}  // namespace ltispec
