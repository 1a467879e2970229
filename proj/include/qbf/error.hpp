#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qbf {

enum class ErrorCode {
  // Data errors.
  LengthMismatch,
  InvalidTreatment,
  TooFewRows,
  NoTreated,
  NoControls,
  UnknownSupport,
  EmptyInput,
  EmptyCell,
  NoNewlyTreated,
  ParseError,
  MissingColumn,
  // Configuration / precondition errors.
  DeltaOutOfRange,
  TauOutOfRange,
  COutOfRange,
  AlphaOutOfRange,
  BandwidthNonpositive,
  InvalidConfig,
  // Numerical degeneracy.
  DegenerateOutcome,
  ZeroDensity,
  BootstrapDegenerate,
};

enum class ErrorCategory { Data, Config, Numerical };

/// Upper-case identifier used in reports and CLI messages, e.g. "EMPTY_CELL".
std::string_view error_code_name(ErrorCode code);

ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return error_category(code_); }

 private:
  ErrorCode code_;
};

}  // namespace qbf
