#include "ltispec/precision.hpp"

#include "ltispec/errors.hpp"

namespace ltispec {

int precision_bits(Precision p) {
  switch (p) {
    case Precision::Auto:
      return 0;
    case Precision::Double:
      return 53;
    case Precision::Quad:
      return 113;
    case Precision::Mp100:
      return 333;
    case Precision::Mp200:
      return 665;
    case Precision::Mp400:
      return 1330;
  }
  return 0;
}

Precision precision_for_dimension(int n) {
  const int need = 8 * n + 40;
  for (Precision p : {Precision::Quad, Precision::Mp100, Precision::Mp200}) {
    if (precision_bits(p) >= need) return p;
  }
  return Precision::Mp400;
}

Precision next_precision(Precision p) {
  switch (p) {
    case Precision::Auto:
    case Precision::Double:
      return Precision::Quad;
    case Precision::Quad:
      return Precision::Mp100;
    case Precision::Mp100:
      return Precision::Mp200;
    case Precision::Mp200:
    case Precision::Mp400:
      return Precision::Mp400;
  }
  return Precision::Mp400;
}

Precision resolve_precision(Precision p, int n) {
  return p == Precision::Auto ? precision_for_dimension(n) : p;
}

std::string to_string(Precision p) {
  switch (p) {
    case Precision::Auto:
      return "auto";
    case Precision::Double:
      return "double";
    case Precision::Quad:
      return "quad";
    case Precision::Mp100:
      return "mp100";
    case Precision::Mp200:
      return "mp200";
    case Precision::Mp400:
      return "mp400";
  }
  return "auto";
}

Precision parse_precision(const std::string& name) {
  for (Precision p : {Precision::Auto, Precision::Double, Precision::Quad, Precision::Mp100,
                      Precision::Mp200, Precision::Mp400}) {
    if (to_string(p) == name) return p;
  }
  throw ParseError("unknown precision '" + name + "'");
}

}  // namespace ltispec
