#pragma once

#include <stdexcept>
#include <string>

namespace mudecay {

// Bad or inconsistent input configuration. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A quadrature or iterative solver did not reach its tolerance. CLI exit code 3.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A checked invariant does not hold. CLI exit code 1.
struct InvariantError : std::runtime_error {
  InvariantError(std::string name, const std::string& detail)
      : std::runtime_error(name + ": " + detail), invariant(std::move(name)) {}
  std::string invariant;
};

}  // namespace mudecay
