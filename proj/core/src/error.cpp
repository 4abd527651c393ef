#include "rankcal/error.hpp"

namespace rankcal {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kAsymmetricAffinity: return "AsymmetricAffinity";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kNotSquare: return "NotSquare";
    case ErrorCode::kMissingLogprobs: return "MissingLogprobs";
    case ErrorCode::kMissingClusterId: return "MissingClusterId";
    case ErrorCode::kMissingAffinity: return "MissingAffinity";
    case ErrorCode::kZeroDegreeRow: return "ZeroDegreeRow";
    case ErrorCode::kMissingConfidence: return "MissingConfidence";
    case ErrorCode::kMissingPrecomputed: return "MissingPrecomputed";
    case ErrorCode::kMissingMeasureValue: return "MissingMeasureValue";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kWrongOrientation: return "WrongOrientation";
    case ErrorCode::kOneClassOnly: return "OneClassOnly";
    case ErrorCode::kInfeasibleK: return "InfeasibleK";
    case ErrorCode::kTooFewPairs: return "TooFewPairs";
    case ErrorCode::kMismatchedTrials: return "MismatchedTrials";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace rankcal
