#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>

#include "ltispec/elementwise.hpp"
#include "ltispec/errors.hpp"
#include "ltispec/io.hpp"
#include "ltispec/models.hpp"
#include "ltispec/recursive.hpp"
#include "ltispec/sim.hpp"
#include "ltispec/spectral.hpp"

using namespace ltispec;
using nlohmann::json;
using cd = std::complex<double>;

namespace {

constexpr const char* kVersion = "ltispec 0.1.0";

struct SourceOpts {
  std::string system_file;
  std::string model;
  std::vector<std::string> params;
  bool allow_marginal = false;
  std::string precision = "auto";
};

struct Source {
  std::string id;
  LtiSystem sys;
  std::optional<ModelSpec> model;
  std::optional<FixedPoint> fp;
};

void add_source_options(CLI::App* cmd, SourceOpts& o) {
  cmd->add_option("--system", o.system_file, "JSON system document");
  cmd->add_option("--model", o.model, "model name (fhn, hr, wc4, ssn, rps)");
  cmd->add_option("--param", o.params, "model parameter override k=v (repeatable)");
  cmd->add_flag("--allow-marginal", o.allow_marginal, "accept marginally stable Jacobians");
  cmd->add_option("--precision", o.precision, "auto, double, quad, mp100, mp200, mp400");
}

ModelSpec build_model(const SourceOpts& o) {
  ParamMap overrides;
  for (const auto& kv : o.params) overrides.insert(parse_param(kv));
  return make_model(o.model, overrides);
}

Source resolve(const SourceOpts& o) {
  if (o.system_file.empty() == o.model.empty()) throw ParseError("give exactly one of --system or --model");
  Source s;
  if (!o.system_file.empty()) {
    if (!o.params.empty()) throw ParseError("--param only applies to --model");
    s.sys = read_system_file(o.system_file);
    s.id = "system:" + o.system_file;
  } else {
    s.model = build_model(o);
    s.fp = find_fixed_point(*s.model);
    s.sys = linearize(*s.model, *s.fp);
    s.id = "model:" + o.model;
  }
  const Stability st = hurwitz_check(s.sys.J);
  if (st == Stability::Unstable || (st == Stability::Marginal && !o.allow_marginal))
    throw StabilityError("Jacobian is " + to_string(st) + "; the spectrum is not defined" +
                         (st == Stability::Marginal ? " (use --allow-marginal to override)" : ""));
  return s;
}

SolveOptions solve_options(const SourceOpts& o) {
  SolveOptions so;
  so.precision = parse_precision(o.precision);
  so.allow_marginal = o.allow_marginal;
  return so;
}

json matrix_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(row);
  }
  return rows;
}

json coefficients_json(const SpectralRational& sr, const ResidualReport& res) {
  json out;
  out["n"] = sr.n;
  out["precision"] = to_string(sr.precision);
  out["q"] = sr.q.coeffs();
  json P = json::array(), Pp = json::array();
  for (const auto& M : sr.P) P.push_back(matrix_json(M));
  for (const auto& M : sr.Pp) Pp.push_back(matrix_json(M));
  out["P"] = P;
  out["Pp"] = Pp;
  out["residuals"] = {{"r1", res.r1},
                      {"r2", res.r2},
                      {"scale1", res.scale1},
                      {"scale2", res.scale2},
                      {"relative1", res.relative1()},
                      {"relative2", res.relative2()}};
  return out;
}

json source_json(const Source& s) {
  json out{{"id", s.id}};
  if (s.model) {
    out["params"] = s.model->params;
    out["fixed_point"] = std::vector<double>(s.fp->x.data(), s.fp->x.data() + s.fp->x.size());
    out["fixed_point_residual"] = s.fp->residual;
    out["fixed_point_method"] = s.fp->method;
  }
  return out;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ParseError("cannot write " + out);
  f << text;
}

bool is_json_path(const std::string& path) {
  return path.size() >= 5 && path.substr(path.size() - 5) == ".json";
}

void emit_spectrum(const std::string& out, const SpectrumDocument& doc) {
  if (is_json_path(out)) {
    emit(out, spectrum_to_json(doc) + "\n");
  } else {
    std::ostringstream ss;
    write_spectrum_csv(ss, doc);
    emit(out, ss.str());
  }
}

// ---------------------------------------------------------------- coeffs

struct CoeffsOpts {
  SourceOpts src;
  std::string method = "recursive";
  std::string element;
  std::string out;
};

int cmd_coeffs(const CoeffsOpts& o) {
  Source s = resolve(o.src);
  json doc{{"version", kVersion}, {"method", o.method}, {"source", source_json(s)}};
  if (o.method == "recursive") {
    if (!o.element.empty()) throw ParseError("--element applies to --method elementwise");
    NoiseCovariance C = build_covariance(s.sys);
    auto sr = solve_recursive(s.sys.J, C, solve_options(o.src));
    doc.update(coefficients_json(sr, residuals(sr, s.sys.J, C)));
  } else if (o.method == "elementwise") {
    const auto pairs = parse_pairs(o.element.empty() ? "1,1" : o.element, s.sys.n());
    if (pairs.size() != 1) throw ParseError("--element takes a single i,j");
    ElementOptions eo;
    eo.precision = parse_precision(o.src.precision);
    auto ec = element_coeffs(s.sys, pairs[0].first, pairs[0].second, eo);
    doc["n"] = s.sys.n();
    doc["element"] = {ec.i + 1, ec.j + 1};
    doc["p"] = ec.p.coeffs();
    doc["pp"] = ec.pp.coeffs();
    doc["q"] = denominator_coeffs(s.sys.J, eo.precision).coeffs();
  } else {
    throw ParseError("--method must be recursive or elementwise");
  }
  emit(o.out, doc.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOpts {
  SourceOpts src;
  std::string method = "recursive";
  std::string freqs = "0.001:10:200:log";
  std::string pairs = "1,1";
  bool coherence = false;
  bool dump_coeffs = false;
  std::string out;
};

// Values of the requested pairs (and the autos they need) on angular grid w.
struct Evaluated {
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::vector<cd>> values;
  std::string coefficients;
};

std::vector<std::pair<int, int>> with_autos(std::vector<std::pair<int, int>> pairs) {
  const auto base = pairs;
  for (auto [i, j] : base) {
    for (int k : {i, j})
      if (std::find(pairs.begin(), pairs.end(), std::make_pair(k, k)) == pairs.end()) pairs.emplace_back(k, k);
  }
  return pairs;
}

Evaluated evaluate_method(const Source& s, const SourceOpts& so, const std::string& method,
                          const std::vector<std::pair<int, int>>& pairs, const std::vector<double>& w) {
  Evaluated ev;
  ev.pairs = pairs;
  ev.values.assign(pairs.size(), std::vector<cd>(w.size()));
  if (method == "recursive") {
    NoiseCovariance C = build_covariance(s.sys);
    auto sr = solve_recursive(s.sys.J, C, solve_options(so));
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto num = sr.real_part(pairs[p].first, pairs[p].second);
      const auto den = sr.imag_part(pairs[p].first, pairs[p].second);
      for (std::size_t k = 0; k < w.size(); ++k) ev.values[p][k] = evaluate_rational(num, den, sr.q, w[k]);
    }
    ev.coefficients = coefficients_json(sr, residuals(sr, s.sys.J, C)).dump(2);
  } else if (method == "elementwise") {
    ElementOptions eo;
    eo.precision = parse_precision(so.precision);
    auto ecs = element_coeffs_batch(s.sys, pairs, eo);
    const auto q = denominator_coeffs(s.sys.J, eo.precision);
    json coeffs{{"q", q.coeffs()}, {"elements", json::array()}};
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      for (std::size_t k = 0; k < w.size(); ++k) ev.values[p][k] = evaluate_rational(ecs[p].p, ecs[p].pp, q, w[k]);
      coeffs["elements"].push_back(
          {{"element", {pairs[p].first + 1, pairs[p].second + 1}}, {"p", ecs[p].p.coeffs()}, {"pp", ecs[p].pp.coeffs()}});
    }
    ev.coefficients = coeffs.dump(2);
  } else if (method == "oracle") {
    for (std::size_t k = 0; k < w.size(); ++k) {
      auto S = matrix_oracle(s.sys, w[k]).S;
      for (std::size_t p = 0; p < pairs.size(); ++p) ev.values[p][k] = S(pairs[p].first, pairs[p].second);
    }
  } else {
    throw ParseError("--method must be recursive, elementwise or oracle");
  }
  return ev;
}

const std::vector<cd>& values_of(const Evaluated& ev, int i, int j) {
  for (std::size_t p = 0; p < ev.pairs.size(); ++p)
    if (ev.pairs[p] == std::make_pair(i, j)) return ev.values[p];
  throw ParseError("internal: pair missing");
}

std::string pair_tag(const std::string& prefix, std::pair<int, int> p) {
  return prefix + std::to_string(p.first + 1) + "_" + std::to_string(p.second + 1);
}

int cmd_spectrum(const SpectrumOpts& o) {
  Source s = resolve(o.src);
  const auto f = parse_freqs(o.freqs);
  const auto pairs = parse_pairs(o.pairs, s.sys.n());
  std::vector<double> w(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) w[k] = 2 * std::numbers::pi * f[k];

  Evaluated ev = evaluate_method(s, o.src, o.method, o.coherence ? with_autos(pairs) : pairs, w);
  SpectrumDocument doc;
  doc.metadata = {{"method", o.method}, {"source", s.id}, {"version", kVersion}, {"convention", kConvention}};
  if (s.model) {
    std::ostringstream ps;
    for (const auto& [k, v] : s.model->params) ps << (ps.tellp() ? " " : "") << k << '=' << v;
    doc.metadata["params"] = ps.str();
  }
  doc.freqs = f;
  doc.pairs = pairs;
  for (const auto& p : pairs) doc.values.push_back(values_of(ev, p.first, p.second));
  if (o.coherence) {
    for (const auto& p : pairs) {
      if (p.first == p.second) continue;
      const auto& sij = values_of(ev, p.first, p.second);
      const auto& sii = values_of(ev, p.first, p.first);
      const auto& sjj = values_of(ev, p.second, p.second);
      std::vector<double> K(f.size());
      for (std::size_t k = 0; k < f.size(); ++k)
        K[k] = std::norm(sij[k]) / (std::abs(sii[k].real()) * std::abs(sjj[k].real()));
      doc.columns[pair_tag("K_", p)] = K;
    }
  }
  if (o.dump_coeffs) doc.coefficients_json = ev.coefficients;
  emit_spectrum(o.out, doc);
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimOpts {
  SourceOpts src;
  double dt = 0;
  int stride = 0;
  double t_total = 0;
  double burn_in = 0;
  std::uint64_t seed = 0;
  int segment = 1 << 14;
  double overlap = 0.5;
  int target_segments = 200;
  std::string window = "hann";
  std::string pairs = "1,1";
  bool coherence = false;
  std::string out;
  std::string trajectory;
};

SdeSystem linear_sde(const LtiSystem& sys) {
  SdeSystem s;
  s.n = sys.n();
  s.m = sys.m();
  const Eigen::MatrixXd J = sys.J, L = sys.L;
  s.drift = [J](const Eigen::VectorXd& x, Eigen::VectorXd& out) { out.noalias() = J * x; };
  s.dispersion = [L](const Eigen::VectorXd&, Eigen::MatrixXd& out) { out = L; };
  s.additive = true;
  s.D = sys.D;
  return s;
}

int cmd_simulate(const SimOpts& o) {
  Source s = resolve(o.src);
  SdeSystem sde;
  SimConfig cfg;
  if (s.model) {
    sde = s.model->sde();
    cfg.x0 = s.fp->x;
    cfg.dt = s.model->sim_dt;
    cfg.stride = s.model->sim_stride;
  } else {
    sde = linear_sde(s.sys);
    cfg.x0 = Eigen::VectorXd::Zero(s.sys.n());
    Eigen::EigenSolver<Eigen::MatrixXd> es(s.sys.J, false);
    const double fastest = es.eigenvalues().cwiseAbs().maxCoeff();
    cfg.dt = 0.01 / std::max(fastest, 1e-12);
    cfg.stride = 10;
  }
  if (o.dt > 0) cfg.dt = o.dt;
  if (o.stride > 0) cfg.stride = o.stride;
  cfg.seed = o.seed;
  cfg.burn_in = o.burn_in;
  WelchConfig wc;
  wc.segment_length = o.segment;
  wc.overlap_fraction = o.overlap;
  if (o.window == "hann") wc.window = Window::Hann;
  else if (o.window == "rect") wc.window = Window::Rectangular;
  else throw ParseError("--window must be hann or rect");
  wc.validate();
  const double sample_dt = cfg.dt * cfg.stride;
  if (o.t_total > 0) {
    cfg.t_total = o.t_total;
  } else {
    const double hop = wc.segment_length - std::lround(wc.overlap_fraction * wc.segment_length);
    cfg.t_total = cfg.burn_in + sample_dt * (wc.segment_length + hop * (o.target_segments - 1) + 1);
  }
  const auto pairs = parse_pairs(o.pairs, s.sys.n());
  Trajectory traj = simulate(sde, cfg);
  traj.model_id = s.id;
  if (!o.trajectory.empty()) {
    std::ofstream tf(o.trajectory);
    if (!tf) throw ParseError("cannot write " + o.trajectory);
    write_trajectory_csv(tf, traj, s.sys.labels);
  }
  const auto est_pairs = o.coherence ? with_autos(pairs) : pairs;
  SpectrumEstimate est = welch_spectrum(traj, est_pairs, wc);

  SpectrumDocument doc;
  std::ostringstream num;
  num << std::setprecision(17);
  auto str = [&](double v) {
    num.str("");
    num << v;
    return num.str();
  };
  doc.metadata = {{"method", "welch"},
                  {"source", s.id},
                  {"version", kVersion},
                  {"convention", kConvention},
                  {"seed", std::to_string(o.seed)},
                  {"rng", kRngName},
                  {"integrator", "euler-maruyama (Ito)"},
                  {"sim_dt", str(cfg.dt)},
                  {"sample_dt", str(traj.dt)},
                  {"t_total", str(cfg.t_total)},
                  {"burn_in", str(cfg.burn_in)},
                  {"segments", std::to_string(est.n_segments)},
                  {"segment_length", std::to_string(wc.segment_length)},
                  {"overlap", str(wc.overlap_fraction)},
                  {"window", o.window}};
  for (std::size_t b = 1; b < est.freqs.size(); ++b) doc.freqs.push_back(est.freqs[b]);
  doc.pairs = pairs;
  for (const auto& p : pairs) {
    const auto& v = est.at(p.first, p.second);
    doc.values.emplace_back(v.data() + 1, v.data() + v.size());
  }
  if (o.coherence) {
    for (const auto& p : pairs) {
      if (p.first == p.second) continue;
      Eigen::VectorXd K = coherence_estimate(est, p.first, p.second);
      doc.columns[pair_tag("K_", p)] = std::vector<double>(K.data() + 1, K.data() + K.size());
    }
  }
  emit_spectrum(o.out, doc);
  return 0;
}

// ---------------------------------------------------------------- compare

struct CompareOpts {
  SourceOpts src;
  std::string freqs = "0.001:10:100:log";
  std::string pairs = "1,1";
  double tol = 1e-8;
  std::string out;
};

int cmd_compare(const CompareOpts& o) {
  Source s = resolve(o.src);
  const auto f = parse_freqs(o.freqs);
  const auto pairs = parse_pairs(o.pairs, s.sys.n());
  std::vector<double> w(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) w[k] = 2 * std::numbers::pi * f[k];
  const auto all = with_autos(pairs);
  const Evaluated rec = evaluate_method(s, o.src, "recursive", all, w);
  const Evaluated ele = evaluate_method(s, o.src, "elementwise", all, w);
  const Evaluated ora = evaluate_method(s, o.src, "oracle", all, w);

  // |a - b| / max(|b_ij|, 1e-4 sqrt(b_ii b_jj)) with b the oracle.
  auto discrepancy = [&](const Evaluated& a, const Evaluated& b, std::pair<int, int> p) {
    const auto& x = values_of(a, p.first, p.second);
    const auto& y = values_of(b, p.first, p.second);
    const auto& yi = values_of(ora, p.first, p.first);
    const auto& yj = values_of(ora, p.second, p.second);
    double worst = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double floor = 1e-4 * std::sqrt(std::abs(yi[k].real() * yj[k].real()));
      worst = std::max(worst, std::abs(x[k] - y[k]) / std::max({std::abs(y[k]), floor, 1e-300}));
    }
    return worst;
  };
  json report{{"version", kVersion},
              {"source", source_json(s)},
              {"convention", kConvention},
              {"tolerance", o.tol},
              {"freqs", o.freqs},
              {"pairs", json::array()}};
  bool pass = true;
  for (const auto& p : pairs) {
    const double ro = discrepancy(rec, ora, p), eo = discrepancy(ele, ora, p), re = discrepancy(rec, ele, p);
    const bool ok = ro <= o.tol && eo <= o.tol && re <= o.tol;
    pass = pass && ok;
    report["pairs"].push_back({{"pair", {p.first + 1, p.second + 1}},
                               {"recursive_vs_oracle", ro},
                               {"elementwise_vs_oracle", eo},
                               {"recursive_vs_elementwise", re},
                               {"pass", ok}});
  }
  report["pass"] = pass;
  emit(o.out, report.dump(2) + "\n");
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------- models

int cmd_models(bool as_json) {
  json out = json::array();
  for (const auto& name : model_names()) {
    auto m = make_model(name);
    if (as_json) {
      out.push_back({{"name", name}, {"n", m.n}, {"params", m.params}, {"labels", m.labels}});
      continue;
    }
    std::cout << name << "  n=" << m.n << "\n ";
    for (const auto& [k, v] : m.params) std::cout << ' ' << k << '=' << v;
    std::cout << '\n';
  }
  if (as_json) std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational power spectral densities of linear SDEs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CoeffsOpts co;
  auto* coeffs = app.add_subcommand("coeffs", "print spectral coefficients as JSON");
  add_source_options(coeffs, co.src);
  coeffs->add_option("--method", co.method, "recursive or elementwise");
  coeffs->add_option("--element", co.element, "i,j (1-based) for --method elementwise");
  coeffs->add_option("--out", co.out, "output file (stdout by default)");

  SpectrumOpts so;
  auto* spectrum = app.add_subcommand("spectrum", "evaluate S on a frequency grid");
  add_source_options(spectrum, so.src);
  spectrum->add_option("--method", so.method, "recursive, elementwise or oracle");
  spectrum->add_option("--freqs", so.freqs, "ordinary frequency grid min:max:count:log|lin");
  spectrum->add_option("--pairs", so.pairs, "entries as \"i,j;k,l\" (1-based)");
  spectrum->add_flag("--coherence", so.coherence, "add K_i_j columns for cross pairs");
  spectrum->add_flag("--dump-coeffs", so.dump_coeffs, "embed coefficients (JSON output)");
  spectrum->add_option("--out", so.out, "file.csv or file.json (CSV on stdout by default)");

  SimOpts sm;
  auto* simulate_cmd = app.add_subcommand("simulate", "Euler-Maruyama run plus Welch estimate");
  add_source_options(simulate_cmd, sm.src);
  simulate_cmd->add_option("--dt", sm.dt, "integration step (model default)");
  simulate_cmd->add_option("--stride", sm.stride, "record every k-th step (model default)");
  simulate_cmd->add_option("--t-total", sm.t_total, "duration (default: enough for --segments)");
  simulate_cmd->add_option("--burn-in", sm.burn_in, "discarded initial duration");
  simulate_cmd->add_option("--seed", sm.seed, "64-bit seed");
  simulate_cmd->add_option("--segment", sm.segment, "Welch segment length in samples");
  simulate_cmd->add_option("--overlap", sm.overlap, "Welch overlap fraction");
  simulate_cmd->add_option("--segments", sm.target_segments, "segments to simulate for when --t-total is unset");
  simulate_cmd->add_option("--window", sm.window, "hann or rect");
  simulate_cmd->add_option("--pairs", sm.pairs, "entries as \"i,j;k,l\" (1-based)");
  simulate_cmd->add_flag("--coherence", sm.coherence, "add K_i_j columns for cross pairs");
  simulate_cmd->add_option("--out", sm.out, "file.csv or file.json (CSV on stdout by default)");
  simulate_cmd->add_option("--trajectory", sm.trajectory, "also write the trajectory CSV here");

  CompareOpts cm;
  auto* compare = app.add_subcommand("compare", "recursive vs element-wise vs matrix oracle");
  add_source_options(compare, cm.src);
  compare->add_option("--freqs", cm.freqs, "ordinary frequency grid min:max:count:log|lin");
  compare->add_option("--pairs", cm.pairs, "entries as \"i,j;k,l\" (1-based)");
  compare->add_option("--tol", cm.tol, "pass threshold on the relative discrepancy");
  compare->add_option("--out", cm.out, "report file (stdout by default)");

  bool models_json = false;
  auto* models = app.add_subcommand("models", "list the built-in models and their defaults");
  models->add_flag("--json", models_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*coeffs) return cmd_coeffs(co);
    if (*spectrum) return cmd_spectrum(so);
    if (*simulate_cmd) return cmd_simulate(sm);
    if (*compare) return cmd_compare(cm);
    if (*models) return cmd_models(models_json);
  } catch (const StabilityError& e) {
    std::cerr << "ltispec: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "ltispec: " << e.what() << '\n';
    return 4;
  } catch (const SimulationError& e) {
    std::cerr << "ltispec: " << e.what() << " (step " << e.step() << ")\n";
    return 5;
  } catch (const Error& e) {
    std::cerr << "ltispec: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
