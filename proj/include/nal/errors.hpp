#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nal {

enum class ErrorKind {
  kDimensionMismatch,
  kInvalidArgument,
  kDomainError,
  kNotInterior,
  kFrameMismatch,
  kRankDeficient,
  kNonPositiveEigenvalue,
  kMaxInnerExceeded,
  kNumericalFailure,
  kParseError,
  kUnsupportedFeature,
  kConeNotSupported,
};

std::string_view to_string(ErrorKind kind);

// Base of every error thrown by the library. The kind lets callers (the CLI in
// particular) map failures to exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace nal
