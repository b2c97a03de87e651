#include "pdhs/errors.hpp"

namespace pdhs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonSymmetric: return "NonSymmetric";
    case ErrorCode::kBadBlockStructure: return "BadBlockStructure";
    case ErrorCode::kNotDissipative: return "NotDissipative";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNumericOverflow: return "NumericOverflow";
    case ErrorCode::kNonFiniteSymbol: return "NonFiniteSymbol";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kInvalidGrid: return "InvalidGrid";
    case ErrorCode::kZeroLocalization: return "ZeroLocalization";
    case ErrorCode::kZeroNorm: return "ZeroNorm";
    case ErrorCode::kNonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::kParameterOrder: return "ParameterOrder";
    case ErrorCode::kStiffnessGuard: return "StiffnessGuard";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kKalmanFails: return "KalmanFails";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kNonPositiveNorm: return "NonPositiveNorm";
    case ErrorCode::kSupportOverflow: return "SupportOverflow";
    case ErrorCode::kRegularityFail: return "RegularityFail";
    case ErrorCode::kQuadratureUnresolved: return "QuadratureUnresolved";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace pdhs
