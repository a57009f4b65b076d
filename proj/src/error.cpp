#include "fwipm/error.h"

namespace fwipm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPsd: return "NotPsd";
    case ErrorCode::kNotPd: return "NotPd";
    case ErrorCode::kSingular: return "Singular";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kBadDims: return "BadDims";
    case ErrorCode::kNotInterior: return "NotInterior";
    case ErrorCode::kDegenerateObjective: return "DegenerateObjective";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kZeroDirection: return "ZeroDirection";
    case ErrorCode::kMonotoneAlongDirection: return "MonotoneAlongDirection";
    case ErrorCode::kNoStartingPoint: return "NoStartingPoint";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kAsymmetricEntry: return "AsymmetricEntry";
    case ErrorCode::kInvariantViolated: return "InvariantViolated";
  }
  return "Unknown";
}

}  // namespace fwipm
