#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ltispec/lti.hpp"

namespace ltispec {

/// {"n": int, "m": int, "J": [[...]], "L": [[...]]?, "D": [...]?, "labels": [...]?}
/// L defaults to the identity and D to ones. Errors name the offending field.
LtiSystem parse_system_json(const std::string& text);
LtiSystem read_system_file(const std::string& path);
std::string system_to_json(const LtiSystem& sys);

/// "min:max:count:log" or "min:max:count:lin"; count >= 1, log needs min > 0.
std::vector<double> parse_freqs(const std::string& spec);

/// "1,1;1,2" (1-based) -> {(0,0), (0,1)}; checked against n when n > 0.
std::vector<std::pair<int, int>> parse_pairs(const std::string& spec, int n = 0);

/// "k=v"
std::pair<std::string, double> parse_param(const std::string& kv);

/// Frequencies are ordinary (f); values are S(w) at w = 2 pi f.
struct SpectrumDocument {
  std::map<std::string, std::string> metadata;
  std::vector<double> freqs;
  std::vector<std::pair<int, int>> pairs;                 // 0-based
  std::vector<std::vector<std::complex<double>>> values;  // aligned with pairs
  std::map<std::string, std::vector<double>> columns;     // extra real columns, e.g. K_1_2
  std::string coefficients_json;                          // optional raw JSON object

  void validate() const;
  friend bool operator==(const SpectrumDocument&, const SpectrumDocument&) = default;
};

inline constexpr const char* kConvention =
    "freq is ordinary frequency f; values are the two-sided density S(w) at w = 2*pi*f";

/// Header `freq,S_i_j_re[,S_i_j_im],...` after `# key=value` lines; auto pairs carry no _im column.
void write_spectrum_csv(std::ostream& os, const SpectrumDocument& doc);
SpectrumDocument read_spectrum_csv(std::istream& is);

std::string spectrum_to_json(const SpectrumDocument& doc);
SpectrumDocument spectrum_from_json(const std::string& text);

}  // namespace ltispec
