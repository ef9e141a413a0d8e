#pragma once

#include <stdexcept>
#include <string>

namespace sqtile {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SizeMismatch : Error {
  using Error::Error;
};
struct NotConnected : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct SingularMatrix : Error {
  using Error::Error;
};
struct OrbitTooLarge : Error {
  using Error::Error;
};
struct DegenerateStream : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct NotInvariant : Error {
  using Error::Error;
};
struct HypothesisFailure : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

// Carries the exact offending pairing as text, e.g. "-3/2".
struct PreconditionViolated : Error {
  PreconditionViolated(const std::string& what, std::string value)
      : Error(what + " (offending value " + value + ")"), offending_value(std::move(value)) {}
  std::string offending_value;
};

}  // namespace sqtile
