#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ltispec/lti.hpp"
#include "ltispec/sim.hpp"

namespace ltispec {

using ParamMap = std::map<std::string, double>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd& x)>;

enum class FixedPointStart {
  Analytic,  // exact fixed point supplied by the model
  Newton,    // damped Newton from guess
  Relax,     // deterministic relaxation from guess, then Newton
};

struct ModelSpec {
  std::string name;
  int n = 0, m = 0;
  ParamMap params;
  std::vector<std::string> labels;
  DriftFn drift;
  DispersionFn dispersion;
  bool additive = false;
  JacobianFn jacobian;  // analytic, empty when only finite differences are available

  FixedPointStart start = FixedPointStart::Newton;
  Eigen::VectorXd guess;  // starting state, or the exact point for Analytic
  double relax_dt = 1e-2;
  double relax_time = 0;

  // Simulation defaults.
  double sim_dt = 1e-3;
  int sim_stride = 10;

  SdeSystem sde() const;
  Eigen::VectorXd drift_at(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dispersion_at(const Eigen::VectorXd& x) const;
};

struct FixedPoint {
  Eigen::VectorXd x;
  double residual = 0;   // ||f(x)||
  std::string method;    // analytic | newton | relax+newton
  int iterations = 0;

  bool converged() const { return residual <= 1e-10 * (1 + x.norm()); }
};

struct NewtonOptions {
  int max_iterations = 200;
  double tol = 1e-12;
};

/// Damped Newton with backtracking on ||f||, central-difference Jacobian.
FixedPoint newton_fixed_point(const DriftFn& f, Eigen::VectorXd x0, const NewtonOptions& opts = {});

/// Central differences with step rel_step * max(1, |x_k|).
Eigen::MatrixXd fd_jacobian(const DriftFn& f, const Eigen::VectorXd& x, double rel_step = 1e-6);

/// Fixed point per the model's start mode; throws NumericalError when Newton fails.
FixedPoint find_fixed_point(const ModelSpec& model);

/// J at the fixed point (analytic when available), L = dispersion(x*), D = ones.
LtiSystem linearize(const ModelSpec& model, const FixedPoint& fp);

ModelSpec fhn_model(const ParamMap& overrides = {});
ModelSpec hindmarsh_rose_model(const ParamMap& overrides = {});
ModelSpec wilson_cowan_model(const ParamMap& overrides = {});
ModelSpec ssn_model(const ParamMap& overrides = {});
ModelSpec rps_model(const ParamMap& overrides = {});

/// Jacobian entries as printed for the mutation model at x_i = 1/n (1-based parity).
Eigen::MatrixXd rps_printed_jacobian(int n, double mu);
/// Appends x_n = 1 - sum(x) to a reduced mutation-model state.
Eigen::VectorXd rps_full_state(const Eigen::VectorXd& reduced);

std::vector<std::string> model_names();
/// Throws ParseError on unknown names or parameters.
ModelSpec make_model(const std::string& name, const ParamMap& overrides = {});

}  // namespace ltispec
