#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace biasdrift {

/// Machine-greppable error class, printed by the CLI as E_USAGE / E_PARSE / E_DATA.
enum class ErrorCode { Usage, Parse, Data };

inline const char* error_code_tag(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Usage: return "E_USAGE";
    case ErrorCode::Parse: return "E_PARSE";
    case ErrorCode::Data: return "E_DATA";
  }
  return "E_DATA";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message) : Error(ErrorCode::Usage, message) {}
};

/// One problem found in a CSV input. Row 1 is the header.
struct Diagnostic {
  std::size_t row = 0;
  std::string field;
  std::string message;
};

inline std::string format_diagnostic(const Diagnostic& d) {
  std::string out = "row " + std::to_string(d.row);
  if (!d.field.empty()) out += ", field `" + d.field + "`";
  return out + ": " + d.message;
}

/// Raised when an input cannot be read or fails validation. Parsing is
/// all-or-nothing, so every problem found is collected before throwing.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error(ErrorCode::Parse, message) {}

  explicit ParseError(std::vector<Diagnostic> diagnostics)
      : Error(ErrorCode::Parse, join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  static std::string join(const std::vector<Diagnostic>& diagnostics) {
    std::string out;
    for (const auto& d : diagnostics) {
      if (!out.empty()) out += "; ";
      out += format_diagnostic(d);
    }
    return out;
  }

  std::vector<Diagnostic> diagnostics_;
};

enum class DataErrorKind {
  InvalidRecord,
  MixedDates,
  UndefinedBias,
  OutOfOrder,
  EmptySeries,
  InsufficientSeries,
  Conflict,
  Io,
};

class DataError : public Error {
 public:
  DataError(DataErrorKind kind, const std::string& message)
      : Error(ErrorCode::Data, message), kind_(kind) {}

  DataErrorKind kind() const noexcept { return kind_; }

 private:
  DataErrorKind kind_;
};

}  // namespace biasdrift
