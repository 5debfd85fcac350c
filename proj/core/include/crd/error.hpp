#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crd {

enum class ErrorKind {
  InvalidArgument,
  SpectrumError,
  ZeroMatrix,
  OddDimension,
  NegativeProduct,
  UnsupportedDim,
  MissingRepresentation,
  H0Violation,
  NonFiniteValue,
  NewtonDivergence,
  StationaryDivergence,
  BoundViolated,
  ConditionFailed,
  ParseError,
  ValidationError,
  IoError,
};

/// Stable identifier used in error.json ("ZeroMatrix", "H0Violation", ...).
std::string_view to_string(ErrorKind kind) noexcept;

/// The single exception type thrown by the library. `details` carries the
/// full list of violations for ParseError / ValidationError.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::vector<std::string> details = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorKind kind_;
  std::vector<std::string> details_;
};

}  // namespace crd
