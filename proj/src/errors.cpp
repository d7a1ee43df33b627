#include "nal/errors.hpp"

namespace nal {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kDomainError: return "DomainError";
    case ErrorKind::kNotInterior: return "NotInterior";
    case ErrorKind::kFrameMismatch: return "FrameMismatch";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kNonPositiveEigenvalue: return "NonPositiveEigenvalue";
    case ErrorKind::kMaxInnerExceeded: return "MaxInnerExceeded";
    case ErrorKind::kNumericalFailure: return "NumericalFailure";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kUnsupportedFeature: return "UnsupportedFeature";
    case ErrorKind::kConeNotSupported: return "ConeNotSupported";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

ParseError::ParseError(std::size_t line, std::size_t column,
                       const std::string& message)
    : Error(ErrorKind::kParseError, "line " + std::to_string(line) +
                                        ", column " + std::to_string(column) +
                                        ": " + message),
      line_(line),
      column_(column) {}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace nal
