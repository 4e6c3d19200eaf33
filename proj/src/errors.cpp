#include "pcornet/errors.hpp"

namespace pcornet {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::DegenerateTable: return "DegenerateTable";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::AllZeroCorrelations: return "AllZeroCorrelations";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::InfeasibleMask: return "InfeasibleMask";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ColumnMismatch: return "ColumnMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooManyFailures: return "TooManyFailures";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateHeader: return "DuplicateHeader";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pcornet
