#include "crd/error.hpp"

#include <utility>

namespace crd {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SpectrumError: return "SpectrumError";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::OddDimension: return "OddDimension";
    case ErrorKind::NegativeProduct: return "NegativeProduct";
    case ErrorKind::UnsupportedDim: return "UnsupportedDim";
    case ErrorKind::MissingRepresentation: return "MissingRepresentation";
    case ErrorKind::H0Violation: return "H0Violation";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::StationaryDivergence: return "StationaryDivergence";
    case ErrorKind::BoundViolated: return "BoundViolated";
    case ErrorKind::ConditionFailed: return "ConditionFailed";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::vector<std::string> details)
    : std::runtime_error(message), kind_(kind), details_(std::move(details)) {}

}  // namespace crd
