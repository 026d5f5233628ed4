#include <doctest.h>

#include <sstream>

#include "ltispec/errors.hpp"
#include "ltispec/io.hpp"

using namespace ltispec;

TEST_CASE("system document defaults and round trip") {
  auto sys = parse_system_json(R"({"n": 2, "J": [[-1, 0.5], [0, -2]]})");
  CHECK(sys.m() == 2);
  CHECK(sys.L.isIdentity());
  CHECK(sys.D.isOnes());
  auto full = parse_system_json(R"({"n": 2, "m": 1, "J": [[-1, 0.5], [0, -2]], "L": [[1], [0.25]],
                                   "D": [4], "labels": ["a", "b"]})");
  CHECK(full.L(1, 0) == 0.25);
  CHECK(full.D(0) == 4);
  auto back = parse_system_json(system_to_json(full));
  CHECK(back.J == full.J);
  CHECK(back.L == full.L);
  CHECK(back.D == full.D);
  CHECK(back.labels == full.labels);
}

TEST_CASE("system document errors name the field") {
  auto message = [](const std::string& text) {
    try {
      parse_system_json(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"J": [[1]]})").find("'n'") != std::string::npos);
  CHECK(message(R"({"n": 2, "J": [[1, 2], [3]]})").find("J[1]") != std::string::npos);
  CHECK(message(R"({"n": 1, "J": [["x"]]})").find("J[0][0]") != std::string::npos);
  CHECK(message(R"({"n": 2, "m": 1, "J": [[1, 0], [0, 1]]})").find("L") != std::string::npos);
  CHECK(message(R"({"n": 1, "J": [[1]], "D": [-1]})").find("D[0]") != std::string::npos);
  CHECK(message("{\"n\": 1,\n \"J\": [[1]]\n,}").find("line 3") != std::string::npos);
}

TEST_CASE("grids, pairs and parameters") {
  auto f = parse_freqs("0.01:10:4:log");
  REQUIRE(f.size() == 4);
  CHECK(f[0] == doctest::Approx(0.01));
  CHECK(f[1] == doctest::Approx(0.1));
  CHECK(f[3] == doctest::Approx(10));
  auto g = parse_freqs("0:1:3:lin");
  CHECK(g[1] == 0.5);
  CHECK_THROWS_AS(parse_freqs("0:1:3:log"), ParseError);
  CHECK_THROWS_AS(parse_freqs("1:2:3"), ParseError);
  CHECK_THROWS_AS(parse_freqs("1:2:x:lin"), ParseError);

  auto p = parse_pairs("1,1; 1,2;3,2");
  REQUIRE(p.size() == 3);
  CHECK(p[1] == std::make_pair(0, 1));
  CHECK(p[2] == std::make_pair(2, 1));
  CHECK_THROWS_AS(parse_pairs("0,1"), ParseError);
  CHECK_THROWS_AS(parse_pairs("1,4", 3), ParseError);
  CHECK_THROWS_AS(parse_pairs(""), ParseError);

  auto kv = parse_param("mu=5e-4");
  CHECK(kv.first == "mu");
  CHECK(kv.second == 5e-4);
  CHECK_THROWS_AS(parse_param("mu"), ParseError);
}

TEST_CASE("spectrum documents round trip through CSV and JSON") {
  SpectrumDocument doc;
  doc.metadata = {{"method", "recursive"}, {"convention", kConvention}, {"seed", "7"}};
  doc.freqs = {0.1, 0.2, 1.0 / 3.0};
  doc.pairs = {{0, 0}, {0, 1}};
  doc.values = {{{1.0 / 7, 0}, {2e-300, 0}, {3.5, 0}}, {{0.1, -0.2}, {1e-17, 1.0 / 3}, {-4, 5}}};
  doc.columns["K_1_2"] = {0.5, 0.25, 1.0 / 9};

  std::stringstream ss;
  write_spectrum_csv(ss, doc);
  CHECK(ss.str().find("freq,S_1_1_re,S_1_2_re,S_1_2_im,K_1_2") != std::string::npos);
  CHECK(read_spectrum_csv(ss) == doc);

  doc.coefficients_json = "{\n  \"q\": [\n    1.0,\n    2.0\n  ]\n}";
  CHECK(spectrum_from_json(spectrum_to_json(doc)) == doc);

  std::stringstream bad("freq,S_1_1_re\n0.1,abc\n");
  CHECK_THROWS_AS(read_spectrum_csv(bad), ParseError);
}
