#pragma once

#include <stdexcept>
#include <string>

namespace nmrqc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// argument outside the domain where a formula is defined
struct DomainError : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  using Error::Error;
};

// adaptive integrator could not meet the requested tolerance
struct StepFailure : Error {
  using Error::Error;
};

struct EncodingBlocked : Error {
  using Error::Error;
};

struct InvalidPort : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct ScenarioError : Error {
  using Error::Error;
};

}  // namespace nmrqc
