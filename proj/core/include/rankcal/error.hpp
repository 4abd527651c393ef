#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rankcal {

enum class ErrorCode {
  kMalformedLine,
  kSchemaViolation,
  kAsymmetricAffinity,
  kDuplicateId,
  kNotSquare,
  kMissingLogprobs,
  kMissingClusterId,
  kMissingAffinity,
  kZeroDegreeRow,
  kMissingConfidence,
  kMissingPrecomputed,
  kMissingMeasureValue,
  kTooFewPoints,
  kWrongOrientation,
  kOneClassOnly,
  kInfeasibleK,
  kTooFewPairs,
  kMismatchedTrials,
  kInvalidArgument,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure surfaced by the library carries a code so callers (the CLI in
// particular) can map it to a structured summary without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rankcal
