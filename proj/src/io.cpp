#include "ltispec/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "ltispec/errors.hpp"

namespace ltispec {

using nlohmann::json;

namespace {

std::string line_of(const std::string& text, std::size_t byte) {
  const auto line = 1 + std::count(text.begin(), text.begin() + std::min(byte, text.size()), '\n');
  return "line " + std::to_string(line);
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(where + ": not finite");
  return x;
}

Eigen::MatrixXd matrix_at(const json& v, const std::string& field, int rows, int cols) {
  if (!v.is_array()) throw ParseError(field + ": expected a list of rows");
  if (static_cast<int>(v.size()) != rows)
    throw ParseError(field + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(v.size()));
  Eigen::MatrixXd M(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const std::string rw = field + "[" + std::to_string(r) + "]";
    if (!v[r].is_array()) throw ParseError(rw + ": expected a list");
    if (static_cast<int>(v[r].size()) != cols)
      throw ParseError(rw + ": expected " + std::to_string(cols) + " entries, got " + std::to_string(v[r].size()));
    for (int c = 0; c < cols; ++c) M(r, c) = number_at(v[r][c], rw + "[" + std::to_string(c) + "]");
  }
  return M;
}

int int_at(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ParseError("missing field '" + key + "'");
  const auto& v = doc[key];
  if (!v.is_number_integer() || v.get<long long>() < 1) throw ParseError(key + ": expected a positive integer");
  return v.get<int>();
}

std::string pair_name(const std::pair<int, int>& p) {
  return "S_" + std::to_string(p.first + 1) + "_" + std::to_string(p.second + 1);
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": bad number '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

}  // namespace

LtiSystem parse_system_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("system document, " + line_of(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("system document must be a JSON object");
  const int n = int_at(doc, "n");
  if (!doc.contains("J")) throw ParseError("missing field 'J'");
  Eigen::MatrixXd J = matrix_at(doc["J"], "J", n, n);
  int m = n;
  if (doc.contains("m")) m = int_at(doc, "m");
  Eigen::MatrixXd L;
  if (doc.contains("L")) {
    L = matrix_at(doc["L"], "L", n, m);
  } else {
    if (m != n) throw ParseError("L: required when m != n");
    L = Eigen::MatrixXd::Identity(n, n);
  }
  Eigen::VectorXd D = Eigen::VectorXd::Ones(m);
  if (doc.contains("D")) {
    const auto& d = doc["D"];
    if (!d.is_array() || static_cast<int>(d.size()) != m)
      throw ParseError("D: expected a list of " + std::to_string(m) + " numbers");
    for (int k = 0; k < m; ++k) {
      D(k) = number_at(d[k], "D[" + std::to_string(k) + "]");
      if (D(k) < 0) throw ParseError("D[" + std::to_string(k) + "]: must be nonnegative");
    }
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const auto& l = doc["labels"];
    if (!l.is_array() || static_cast<int>(l.size()) != n)
      throw ParseError("labels: expected a list of " + std::to_string(n) + " strings");
    for (std::size_t k = 0; k < l.size(); ++k) {
      if (!l[k].is_string()) throw ParseError("labels[" + std::to_string(k) + "]: expected a string");
      labels.push_back(l[k].get<std::string>());
    }
  }
  return LtiSystem(J, L, D, labels);
}

LtiSystem read_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_system_json(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string system_to_json(const LtiSystem& sys) {
  auto rows = [](const Eigen::MatrixXd& M) {
    json out = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
      out.push_back(row);
    }
    return out;
  };
  json doc{{"n", sys.n()}, {"m", sys.m()}, {"J", rows(sys.J)}, {"L", rows(sys.L)}};
  doc["D"] = std::vector<double>(sys.D.data(), sys.D.data() + sys.D.size());
  if (!sys.labels.empty()) doc["labels"] = sys.labels;
  return doc.dump(2);
}

std::vector<double> parse_freqs(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 4) throw ParseError("--freqs: expected min:max:count:log|lin, got '" + spec + "'");
  const double lo = parse_double(parts[0], "--freqs min"), hi = parse_double(parts[1], "--freqs max");
  const double cnt = parse_double(parts[2], "--freqs count");
  if (cnt < 1 || cnt != std::floor(cnt)) throw ParseError("--freqs: count must be a positive integer");
  const int count = static_cast<int>(cnt);
  if (!(lo >= 0) || !(hi >= lo)) throw ParseError("--freqs: need 0 <= min <= max");
  std::vector<double> f(count);
  if (parts[3] == "log") {
    if (!(lo > 0)) throw ParseError("--freqs: log spacing needs min > 0");
    for (int k = 0; k < count; ++k)
      f[k] = count == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (count - 1));
  } else if (parts[3] == "lin") {
    for (int k = 0; k < count; ++k) f[k] = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
  } else {
    throw ParseError("--freqs: spacing must be log or lin");
  }
  return f;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& spec, int n) {
  std::vector<std::pair<int, int>> out;
  for (const auto& item : split(spec, ';')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    const auto ij = split(t, ',');
    if (ij.size() != 2) throw ParseError("--pairs: expected i,j in '" + t + "'");
    const double i = parse_double(trim(ij[0]), "--pairs"), j = parse_double(trim(ij[1]), "--pairs");
    if (i < 1 || j < 1 || i != std::floor(i) || j != std::floor(j))
      throw ParseError("--pairs: indices are 1-based positive integers, got '" + t + "'");
    if (n > 0 && (i > n || j > n))
      throw ParseError("--pairs: '" + t + "' out of range for n = " + std::to_string(n));
    out.emplace_back(static_cast<int>(i) - 1, static_cast<int>(j) - 1);
  }
  if (out.empty()) throw ParseError("--pairs: no pairs given");
  return out;
}

std::pair<std::string, double> parse_param(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError("--param: expected k=v, got '" + kv + "'");
  return {trim(kv.substr(0, eq)), parse_double(trim(kv.substr(eq + 1)), "--param " + kv)};
}

void SpectrumDocument::validate() const {
  if (values.size() != pairs.size()) throw ParseError("spectrum document: one value list per pair");
  for (const auto& v : values)
    if (v.size() != freqs.size()) throw ParseError("spectrum document: value list length differs from freqs");
  for (const auto& [k, v] : columns)
    if (v.size() != freqs.size()) throw ParseError("spectrum document: column " + k + " length differs from freqs");
}

void write_spectrum_csv(std::ostream& os, const SpectrumDocument& doc) {
  doc.validate();
  for (const auto& [k, v] : doc.metadata) os << "# " << k << '=' << v << '\n';
  os << "freq";
  for (const auto& p : doc.pairs) {
    os << ',' << pair_name(p) << "_re";
    if (p.first != p.second) os << ',' << pair_name(p) << "_im";
  }
  for (const auto& [k, v] : doc.columns) os << ',' << k;
  os << '\n' << std::setprecision(17);
  for (std::size_t r = 0; r < doc.freqs.size(); ++r) {
    os << doc.freqs[r];
    for (std::size_t p = 0; p < doc.pairs.size(); ++p) {
      os << ',' << doc.values[p][r].real();
      if (doc.pairs[p].first != doc.pairs[p].second) os << ',' << doc.values[p][r].imag();
    }
    for (const auto& [k, v] : doc.columns) os << ',' << v[r];
    os << '\n';
  }
}

SpectrumDocument read_spectrum_csv(std::istream& is) {
  SpectrumDocument doc;
  std::string line;
  std::vector<std::string> header;
  // column -> (pair index, 0 re / 1 im) or extra column name
  struct Slot {
    int pair = -1;
    int part = 0;
    std::string extra;
  };
  std::vector<Slot> slots;
  long long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) doc.metadata[trim(line.substr(1, eq - 1))] = line.substr(eq + 1);
      continue;
    }
    const auto cells = split(line, ',');
    if (header.empty()) {
      header = cells;
      if (header.empty() || trim(header[0]) != "freq") throw ParseError("spectrum CSV: first column must be freq");
      for (std::size_t c = 1; c < header.size(); ++c) {
        const std::string h = trim(header[c]);
        Slot s;
        int i = 0, j = 0;
        char part[3] = {};
        if (std::sscanf(h.c_str(), "S_%d_%d_%2s", &i, &j, part) == 3 && i >= 1 && j >= 1) {
          const std::pair<int, int> p{i - 1, j - 1};
          auto it = std::find(doc.pairs.begin(), doc.pairs.end(), p);
          if (it == doc.pairs.end()) {
            doc.pairs.push_back(p);
            doc.values.emplace_back();
            it = doc.pairs.end() - 1;
          }
          s.pair = static_cast<int>(it - doc.pairs.begin());
          s.part = std::string(part) == "im" ? 1 : 0;
        } else {
          s.extra = h;
          doc.columns[h];
        }
        slots.push_back(s);
      }
      continue;
    }
    if (cells.size() != header.size())
      throw ParseError("spectrum CSV line " + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " cells");
    const std::string where = "spectrum CSV line " + std::to_string(lineno);
    doc.freqs.push_back(parse_double(trim(cells[0]), where));
    for (auto& v : doc.values) v.emplace_back(0.0, 0.0);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const double x = parse_double(trim(cells[c]), where);
      const Slot& s = slots[c - 1];
      if (s.pair >= 0) {
        auto& z = doc.values[s.pair].back();
        z = s.part ? std::complex<double>(z.real(), x) : std::complex<double>(x, z.imag());
      } else {
        doc.columns[s.extra].push_back(x);
      }
    }
  }
  if (header.empty()) throw ParseError("spectrum CSV: missing header");
  doc.validate();
  return doc;
}

std::string spectrum_to_json(const SpectrumDocument& doc) {
  doc.validate();
  json out;
  out["metadata"] = doc.metadata;
  out["freqs"] = doc.freqs;
  json pairs = json::array(), values = json::object();
  for (std::size_t p = 0; p < doc.pairs.size(); ++p) {
    pairs.push_back({doc.pairs[p].first + 1, doc.pairs[p].second + 1});
    std::vector<double> re, im;
    for (const auto& z : doc.values[p]) {
      re.push_back(z.real());
      im.push_back(z.imag());
    }
    values[pair_name(doc.pairs[p])] = {{"re", re}, {"im", im}};
  }
  out["pairs"] = pairs;
  out["values"] = values;
  out["columns"] = doc.columns;
  if (!doc.coefficients_json.empty()) out["coefficients"] = json::parse(doc.coefficients_json);
  return out.dump(2);
}

SpectrumDocument spectrum_from_json(const std::string& text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("spectrum document, " + line_of(text, e.byte) + ": " + e.what());
  }
  SpectrumDocument doc;
  try {
    doc.metadata = in.at("metadata").get<std::map<std::string, std::string>>();
    doc.freqs = in.at("freqs").get<std::vector<double>>();
    for (const auto& p : in.at("pairs")) {
      const std::pair<int, int> ij{p.at(0).get<int>() - 1, p.at(1).get<int>() - 1};
      doc.pairs.push_back(ij);
      const auto& v = in.at("values").at(pair_name(ij));
      const auto re = v.at("re").get<std::vector<double>>(), im = v.at("im").get<std::vector<double>>();
      if (re.size() != im.size()) throw ParseError(pair_name(ij) + ": re/im length mismatch");
      std::vector<std::complex<double>> z(re.size());
      for (std::size_t k = 0; k < re.size(); ++k) z[k] = {re[k], im[k]};
      doc.values.push_back(std::move(z));
    }
    if (in.contains("columns")) doc.columns = in["columns"].get<std::map<std::string, std::vector<double>>>();
    if (in.contains("coefficients")) doc.coefficients_json = in["coefficients"].dump(2);
  } catch (const json::exception& e) {
    throw ParseError(std::string("spectrum document: ") + e.what());
  }
  doc.validate();
  return doc;
}

}  // namespace ltispec
