#pragma once

#include <stdexcept>
#include <string>

namespace pcornet {

enum class ErrorCode {
  ZeroVariance,
  InsufficientData,
  DegenerateColumn,
  DegenerateTable,
  NotConverged,
  SingularInput,
  RankDeficient,
  AllZeroCorrelations,
  NotPositiveDefinite,
  InfeasibleMask,
  WrongKind,
  IndexOutOfRange,
  ColumnMismatch,
  DimensionMismatch,
  TooManyFailures,
  ParseError,
  DuplicateHeader,
  NonNumericCell,
  SchemaError,
  Unsupported,
  InvalidArgument,
  IoError,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception type. `code()` identifies the failure class so the
/// CLI can map it to a machine-readable error report.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pcornet
