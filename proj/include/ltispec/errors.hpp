#pragma once

#include <stdexcept>
#include <string>

namespace ltispec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Bad documents, flags, or out-of-range indices.
class ParseError : public Error {
 public:
  using Error::Error;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, long long step)
      : Error(what), step_(step) {}
  long long step() const { return step_; }

 private:
  long long step_;
};

}  // namespace ltispec
