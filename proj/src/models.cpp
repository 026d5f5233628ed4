#include "ltispec/models.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "ltispec/errors.hpp"

namespace ltispec {

namespace {

ParamMap merge(ParamMap defaults, const ParamMap& overrides, const std::string& model) {
  for (const auto& [k, v] : overrides) {
    auto it = defaults.find(k);
    if (it == defaults.end()) {
      std::ostringstream msg;
      msg << "model " << model << " has no parameter '" << k << "' (known:";
      for (const auto& kv : defaults) msg << ' ' << kv.first;
      msg << ')';
      throw ParseError(msg.str());
    }
    if (!std::isfinite(v)) throw ParseError("parameter " + k + " must be finite");
    it->second = v;
  }
  return defaults;
}

int as_int(double v, const std::string& name) {
  if (v != std::floor(v) || v < 1) throw ParseError("parameter " + name + " must be a positive integer");
  return static_cast<int>(v);
}

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

DispersionFn constant_dispersion(Eigen::MatrixXd L) {
  return [L = std::move(L)](const Eigen::VectorXd&, Eigen::MatrixXd& out) { out = L; };
}

}  // namespace

SdeSystem ModelSpec::sde() const {
  SdeSystem s;
  s.n = n;
  s.m = m;
  s.drift = drift;
  s.dispersion = dispersion;
  s.additive = additive;
  return s;
}

Eigen::VectorXd ModelSpec::drift_at(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(n);
  drift(x, out);
  return out;
}

Eigen::MatrixXd ModelSpec::dispersion_at(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out(n, m);
  dispersion(x, out);
  return out;
}

Eigen::MatrixXd fd_jacobian(const DriftFn& f, const Eigen::VectorXd& x, double rel_step) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd J(n, n);
  Eigen::VectorXd xp = x, xm = x, fp(n), fm(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double h = rel_step * std::max(1.0, std::abs(x(k)));
    xp(k) = x(k) + h;
    xm(k) = x(k) - h;
    f(xp, fp);
    f(xm, fm);
    J.col(k) = (fp - fm) / (xp(k) - xm(k));
    xp(k) = xm(k) = x(k);
  }
  return J;
}

FixedPoint newton_fixed_point(const DriftFn& f, Eigen::VectorXd x, const NewtonOptions& opts) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd fx(n), trial(n), ft(n);
  f(x, fx);
  FixedPoint fp;
  fp.method = "newton";
  for (int it = 0; it < opts.max_iterations; ++it) {
    double norm = fx.norm();
    if (norm <= opts.tol * (1 + x.norm())) break;
    Eigen::VectorXd step = fd_jacobian(f, x).fullPivLu().solve(-fx);
    if (!step.allFinite()) throw NumericalError("Newton step is not finite");
    double lambda = 1.0;
    bool accepted = false;
    for (int back = 0; back < 40; ++back, lambda *= 0.5) {
      trial = x + lambda * step;
      f(trial, ft);
      if (ft.allFinite() && ft.norm() < (1 - 1e-4 * lambda) * norm) {
        accepted = true;
        break;
      }
    }
    fp.iterations = it + 1;
    if (!accepted) {
      // Full step when backtracking stalls at the rounding floor.
      trial = x + step;
      f(trial, ft);
      if (!(ft.allFinite() && ft.norm() <= norm)) break;
    }
    x = trial;
    fx = ft;
  }
  fp.x = x;
  fp.residual = fx.norm();
  return fp;
}

FixedPoint find_fixed_point(const ModelSpec& model) {
  FixedPoint fp;
  if (model.start == FixedPointStart::Analytic) {
    fp.x = model.guess;
    fp.residual = model.drift_at(fp.x).norm();
    fp.method = "analytic";
  } else {
    Eigen::VectorXd x0 = model.guess;
    if (model.start == FixedPointStart::Relax) {
      Eigen::VectorXd f(model.n);
      const long long steps = std::llround(model.relax_time / model.relax_dt);
      for (long long k = 0; k < steps; ++k) {
        model.drift(x0, f);
        x0 += model.relax_dt * f;
        if (!x0.allFinite()) throw NumericalError("relaxation diverged for model " + model.name);
      }
    }
    fp = newton_fixed_point(model.drift, x0);
    if (model.start == FixedPointStart::Relax) fp.method = "relax+newton";
  }
  if (!fp.converged()) {
    std::ostringstream msg;
    msg << "fixed point of " << model.name << " not found (residual " << fp.residual << ")";
    throw NumericalError(msg.str());
  }
  return fp;
}

LtiSystem linearize(const ModelSpec& model, const FixedPoint& fp) {
  if (!fp.converged()) throw NumericalError("fixed point residual too large to linearize");
  Eigen::MatrixXd J = model.jacobian ? model.jacobian(fp.x) : fd_jacobian(model.drift, fp.x);
  return LtiSystem(J, model.dispersion_at(fp.x), Eigen::VectorXd::Ones(model.m), model.labels);
}

ModelSpec fhn_model(const ParamMap& overrides) {
  ParamMap p = merge({{"I", 0.265}, {"alpha", 0.7}, {"beta", 0.75}, {"eps", 0.08}, {"sigma", 1e-3},
                      {"multiplicative", 1}},
                     overrides, "fhn");
  const double I = p["I"], a = p["alpha"], b = p["beta"], e = p["eps"], s = p["sigma"];
  const bool mult = p["multiplicative"] != 0;
  ModelSpec m;
  m.name = "fhn";
  m.n = m.m = 2;
  m.params = p;
  m.labels = {"v", "w"};
  m.drift = [=](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    out(0) = x(0) - x(0) * x(0) * x(0) / 3 - x(1) + I;
    out(1) = e * (x(0) + a - b * x(1));
  };
  if (mult) {
    m.dispersion = [=](const Eigen::VectorXd& x, Eigen::MatrixXd& out) {
      out.setZero(2, 2);
      out(1, 1) = s * x(1);
    };
  } else {
    m.additive = true;
    m.dispersion = constant_dispersion(Eigen::Vector2d(0, s).asDiagonal());
  }
  m.jacobian = [=](const Eigen::VectorXd& x) {
    Eigen::MatrixXd J(2, 2);
    J << 1 - x(0) * x(0), -1, e, -b * e;
    return J;
  };
  // Start on the cubic nullcline where it meets w = (v + alpha) / beta.
  double v = -1.0;
  for (int it = 0; it < 100; ++it) {
    const double g = v - v * v * v / 3 - (v + a) / b + I, dg = 1 - v * v - 1 / b;
    if (dg == 0) break;
    v -= g / dg;
  }
  m.guess = Eigen::Vector2d(v, (v + a) / b);
  m.sim_dt = 1e-2;
  m.sim_stride = 10;
  return m;
}

ModelSpec hindmarsh_rose_model(const ParamMap& overrides) {
  ParamMap p = merge({{"I", 5.5}, {"b", 0.5}, {"mu", 0.01}, {"x_rest", -1.6}, {"s", 4}, {"sigma", 1e-3}},
                     overrides, "hr");
  const double I = p["I"], b = p["b"], mu = p["mu"], xr = p["x_rest"], s = p["s"], sig = p["sigma"];
  ModelSpec m;
  m.name = "hr";
  m.n = m.m = 3;
  m.params = p;
  m.labels = {"x", "y", "z"};
  m.drift = [=](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    const double x = v(0);
    out(0) = v(1) - x * x * x + b * x * x + I - v(2);
    out(1) = 1 - 5 * x * x - v(1);
    out(2) = mu * (s * (x - xr) - v(2));
  };
  m.additive = true;
  m.dispersion = constant_dispersion(Eigen::Vector3d(sig, 0, 0).asDiagonal());
  m.jacobian = [=](const Eigen::VectorXd& v) {
    const double x = v(0);
    Eigen::MatrixXd J(3, 3);
    J << 2 * b * x - 3 * x * x, 1, -1, -10 * x, -1, 0, mu * s, 0, -mu;
    return J;
  };
  // The cubic has three equilibria here; take the one the resting state relaxes to.
  m.start = FixedPointStart::Relax;
  m.guess = Eigen::Vector3d(xr, 1 - 5 * xr * xr, 0);
  m.relax_dt = 1e-3;
  m.relax_time = 20.0 / std::max(mu, 1e-3);
  m.sim_dt = 1e-3;
  m.sim_stride = 10;
  return m;
}

ModelSpec wilson_cowan_model(const ParamMap& overrides) {
  ParamMap p = merge({{"tau_E", 2},      {"tau_I", 8},       {"tau_sE", 10},   {"tau_sI", 10},
                      {"w_EE", 5},       {"w_EI", 5},        {"w_IE", 3.5},    {"w_II", 3},
                      {"theta_E", 0.4},  {"theta_I", 0.4},   {"kappa_E", 0.2}, {"kappa_I", 0.02},
                      {"gamma_E", 1},    {"gamma_I", 2},     {"I_E", 1},       {"I_I", 0.5},
                      {"s0_E", 0.2},     {"s0_I", 0.05},     {"sigma_r", 1e-3}, {"sigma_s", 2e-3}},
                     overrides, "wc4");
  const double tE = p["tau_E"], tI = p["tau_I"], tsE = p["tau_sE"], tsI = p["tau_sI"];
  const double wEE = p["w_EE"], wEI = p["w_EI"], wIE = p["w_IE"], wII = p["w_II"];
  const double thE = p["theta_E"], thI = p["theta_I"], kE = p["kappa_E"], kI = p["kappa_I"];
  const double gE = p["gamma_E"], gI = p["gamma_I"], IE = p["I_E"], II = p["I_I"];
  const double s0E = p["s0_E"], s0I = p["s0_I"];
  ModelSpec m;
  m.name = "wc4";
  m.n = m.m = 4;
  m.params = p;
  m.labels = {"r_E", "r_I", "s_E", "s_I"};
  auto uE = [=](const Eigen::VectorXd& x) { return (IE + wEE * x(2) - wEI * x(3) - thE) / kE; };
  auto uI = [=](const Eigen::VectorXd& x) { return (II + wIE * x(2) - wII * x(3) - thI) / kI; };
  m.drift = [=](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    out(0) = (-x(0) + sigmoid(uE(x))) / tE;
    out(1) = (-x(1) + sigmoid(uI(x))) / tI;
    out(2) = (-x(2) + gE * x(0) * (1 - x(2)) + s0E) / tsE;
    out(3) = (-x(3) + gI * x(1) * (1 - x(3)) + s0I) / tsI;
  };
  m.jacobian = [=](const Eigen::VectorXd& x) {
    const double fE = sigmoid(uE(x)), fI = sigmoid(uI(x));
    const double dE = fE * (1 - fE) / kE, dI = fI * (1 - fI) / kI;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(4, 4);
    J(0, 0) = -1 / tE;
    J(0, 2) = dE * wEE / tE;
    J(0, 3) = -dE * wEI / tE;
    J(1, 1) = -1 / tI;
    J(1, 2) = dI * wIE / tI;
    J(1, 3) = -dI * wII / tI;
    J(2, 0) = gE * (1 - x(2)) / tsE;
    J(2, 2) = (-1 - gE * x(0)) / tsE;
    J(3, 1) = gI * (1 - x(3)) / tsI;
    J(3, 3) = (-1 - gI * x(1)) / tsI;
    return J;
  };
  m.additive = true;
  m.dispersion = constant_dispersion(
      Eigen::Vector4d(p["sigma_r"] / tE, p["sigma_r"] / tI, p["sigma_s"] / tsE, p["sigma_s"] / tsI).asDiagonal());
  m.start = FixedPointStart::Relax;
  m.guess = Eigen::Vector4d(0.5, 0.5, 0.5, 0.5);
  m.relax_dt = 0.05;
  m.relax_time = 2000;
  m.sim_dt = 0.05;
  m.sim_stride = 10;
  return m;
}

ModelSpec ssn_model(const ParamMap& overrides) {
  ParamMap p = merge({{"N", 11},       {"c", 50},        {"dx", 3.0},     {"sigma_h", 9},
                      {"tau_E", 6},    {"tau_I", 4},     {"k", 0.01},     {"n_pow", 2.2},
                      {"J_EE", 0.06},  {"J_IE", 0.12},   {"sigma_EE", 4},  {"sigma_IE", 6},
                      {"W_EI", 0.4},   {"W_II", 0.05},   {"h0", 0},       {"sigma", 0.01}},
                     overrides, "ssn");
  const int N = as_int(p["N"], "N");
  const double tE = p["tau_E"], tI = p["tau_I"], k = p["k"], np_ = p["n_pow"];
  Eigen::VectorXd pos(N), h(N);
  for (int a = 0; a < N; ++a) {
    pos(a) = (a - (N - 1) / 2.0) * p["dx"];
    h(a) = p["h0"] + p["c"] * std::exp(-pos(a) * pos(a) / (2 * p["sigma_h"] * p["sigma_h"]));
  }
  Eigen::MatrixXd WEE(N, N), WIE(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      const double d2 = (pos(a) - pos(b)) * (pos(a) - pos(b));
      WEE(a, b) = p["J_EE"] * std::exp(-d2 / (2 * p["sigma_EE"] * p["sigma_EE"]));
      WIE(a, b) = p["J_IE"] * std::exp(-d2 / (2 * p["sigma_IE"] * p["sigma_IE"]));
    }
  const double wEI = p["W_EI"], wII = p["W_II"];
  ModelSpec m;
  m.name = "ssn";
  m.n = m.m = 2 * N;
  m.params = p;
  for (int a = 0; a < N; ++a) m.labels.push_back("rE" + std::to_string(a + 1));
  for (int a = 0; a < N; ++a) m.labels.push_back("rI" + std::to_string(a + 1));
  auto inputs = [=](const Eigen::VectorXd& x, Eigen::VectorXd& uE, Eigen::VectorXd& uI) {
    uE = h + WEE * x.head(N) - wEI * x.tail(N);
    uI = h + WIE * x.head(N) - wII * x.tail(N);
  };
  auto act = [=](double u) { return u > 0 ? k * std::pow(u, np_) : 0.0; };
  auto dact = [=](double u) { return u > 0 ? k * np_ * std::pow(u, np_ - 1) : 0.0; };
  m.drift = [=](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    Eigen::VectorXd uE, uI;
    inputs(x, uE, uI);
    for (int a = 0; a < N; ++a) {
      out(a) = (-x(a) + act(uE(a))) / tE;
      out(N + a) = (-x(N + a) + act(uI(a))) / tI;
    }
  };
  m.jacobian = [=](const Eigen::VectorXd& x) {
    Eigen::VectorXd uE, uI;
    inputs(x, uE, uI);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    for (int a = 0; a < N; ++a) {
      const double gE = dact(uE(a)), gI = dact(uI(a));
      J.block(a, 0, 1, N) = gE * WEE.row(a) / tE;
      J(a, N + a) = -gE * wEI / tE;
      J.block(N + a, 0, 1, N) = gI * WIE.row(a) / tI;
      J(N + a, N + a) = -gI * wII / tI;
      J(a, a) -= 1 / tE;
      J(N + a, N + a) -= 1 / tI;
    }
    return J;
  };
  m.additive = true;
  Eigen::VectorXd ldiag(2 * N);
  ldiag.head(N).setConstant(p["sigma"] / tE);
  ldiag.tail(N).setConstant(p["sigma"] / tI);
  m.dispersion = constant_dispersion(ldiag.asDiagonal());
  m.guess = Eigen::VectorXd::Zero(2 * N);
  m.sim_dt = 0.05;
  m.sim_stride = 10;
  return m;
}

Eigen::MatrixXd rps_printed_jacobian(int n, double mu) {
  Eigen::MatrixXd J(n - 1, n - 1);
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      const double sgn = (i % 2 == 0) ? 1.0 : -1.0;
      double v;
      if (i == j) v = sgn / n - mu * n;
      else if (i > j) v = (j % 2 == 1) ? sgn * 2.0 / n : 0.0;
      else v = (j % 2 == 0) ? sgn * 2.0 / n : 0.0;
      J(i - 1, j - 1) = v;
    }
  return J;
}

Eigen::VectorXd rps_full_state(const Eigen::VectorXd& reduced) {
  Eigen::VectorXd x(reduced.size() + 1);
  x.head(reduced.size()) = reduced;
  x(reduced.size()) = 1.0 - reduced.sum();
  return x;
}

ModelSpec rps_model(const ParamMap& overrides) {
  ParamMap p = merge({{"n", 31}, {"mu", 5e-4}, {"sigma", 1e-4}}, overrides, "rps");
  const int n = as_int(p["n"], "n");
  if (n < 3 || n % 2 == 0) throw ParseError("rps needs an odd n >= 3");
  const double mu = p["mu"], sig = p["sigma"];
  if (mu < 0) throw ParseError("rps needs mu >= 0");
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i > j) P(i - 1, j - 1) = ((i + j + 1) % 2 == 0) ? 1 : -1;
      if (i < j) P(i - 1, j - 1) = ((i + j) % 2 == 0) ? 1 : -1;
    }
  const int r = n - 1;
  ModelSpec m;
  m.name = "rps";
  m.n = m.m = r;
  m.params = p;
  for (int i = 1; i <= r; ++i) m.labels.push_back("x" + std::to_string(i));
  m.drift = [=](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    const Eigen::VectorXd full = rps_full_state(x);
    const Eigen::VectorXd f = P * full;
    const double phi = full.dot(f);
    for (int i = 0; i < r; ++i) out(i) = x(i) * (f(i) - phi) + mu * (1.0 - n * x(i));
  };
  m.jacobian = [=](const Eigen::VectorXd& x) {
    const Eigen::VectorXd full = rps_full_state(x);
    const Eigen::VectorXd f = P * full;
    const double phi = full.dot(f);
    // d(phi)/dx_j with x_n eliminated
    const Eigen::VectorXd g = (P + P.transpose()) * full;
    Eigen::MatrixXd J(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        const double dphi = g(j) - g(n - 1);
        J(i, j) = x(i) * (P(i, j) - P(i, n - 1) - dphi) + (i == j ? f(i) - phi - mu * n : 0.0);
      }
    return J;
  };
  m.dispersion = [=](const Eigen::VectorXd& x, Eigen::MatrixXd& out) { out = (sig * x).asDiagonal(); };
  m.start = FixedPointStart::Analytic;
  m.guess = Eigen::VectorXd::Constant(r, 1.0 / n);
  m.sim_dt = 0.05;
  m.sim_stride = 10;
  return m;
}

std::vector<std::string> model_names() { return {"fhn", "hr", "wc4", "ssn", "rps"}; }

ModelSpec make_model(const std::string& name, const ParamMap& overrides) {
  if (name == "fhn") return fhn_model(overrides);
  if (name == "hr") return hindmarsh_rose_model(overrides);
  if (name == "wc4") return wilson_cowan_model(overrides);
  if (name == "ssn") return ssn_model(overrides);
  if (name == "rps") return rps_model(overrides);
  throw ParseError("unknown model '" + name + "' (fhn, hr, wc4, ssn, rps)");
}

}  // namespace ltispec
