#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ltispec {

/// out = f(x).
using DriftFn = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& out)>;
/// out = L(x), n x m.
using DispersionFn = std::function<void(const Eigen::VectorXd& x, Eigen::MatrixXd& out)>;

struct SdeSystem {
  int n = 0, m = 0;
  DriftFn drift;
  DispersionFn dispersion;
  bool additive = false;  // dispersion independent of x, evaluated once
  Eigen::VectorXd D;      // per-channel noise variance, empty means ones
};

struct SimConfig {
  double dt = 1e-3;
  double t_total = 1.0;
  double burn_in = 0.0;
  std::uint64_t seed = 0;
  Eigen::VectorXd x0;
  int stride = 1;  // record every stride-th step

  void validate(int n) const;
};

struct Trajectory {
  double dt = 0;  // sample spacing, SimConfig::dt * stride
  std::uint64_t seed = 0;
  std::string model_id;
  Eigen::MatrixXd X;  // samples x n, column k is variable k

  Eigen::Index samples() const { return X.rows(); }
  int n() const { return static_cast<int>(X.cols()); }
};

inline constexpr const char* kRngName = "boost::random::mt19937_64+normal_distribution(ziggurat), seed=splitmix64";

std::uint64_t splitmix64(std::uint64_t x);
/// Seed for realization k of an ensemble rooted at seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k);

/// Euler-Maruyama, x += f(x) dt + L(x) sqrt(dt) xi, xi ~ N(0, diag(D)).
/// Throws SimulationError with the step index on a non-finite state.
Trajectory simulate(const SdeSystem& sys, const SimConfig& cfg);

/// count realizations with seeds derive_seed(cfg.seed, k), run on up to threads workers.
/// Output order follows k regardless of scheduling.
std::vector<Trajectory> simulate_ensemble(const SdeSystem& sys, const SimConfig& cfg, int count,
                                          int threads = 0);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& labels = {});
Trajectory read_trajectory_csv(std::istream& is);

enum class Window { Hann, Rectangular };

struct WelchConfig {
  int segment_length = 1 << 14;
  double overlap_fraction = 0.5;
  Window window = Window::Hann;
  bool detrend = true;  // subtract the segment mean

  void validate() const;
};

/// Two-sided density on ordinary frequency f >= 0 with S_hat(f) = S(w = 2 pi f).
struct SpectrumEstimate {
  std::vector<double> freqs;
  std::vector<std::pair<int, int>> pairs;
  std::vector<Eigen::VectorXcd> S_hat;  // one per pair, aligned with freqs
  int n_segments = 0;

  const Eigen::VectorXcd& at(int i, int j) const;
  bool has(int i, int j) const;
};

int welch_segment_count(Eigen::Index samples, const WelchConfig& cfg);

SpectrumEstimate welch_spectrum(const Trajectory& traj, const std::vector<std::pair<int, int>>& pairs,
                                const WelchConfig& cfg = {});

/// |S_ij|^2 / (S_ii S_jj) from the averaged estimates.
Eigen::VectorXd coherence_estimate(const SpectrumEstimate& est, int i, int j);

}  // namespace ltispec
