#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace resilock {

enum class ErrorCode {
  kInvalidInput,
  kParseError,
  kIndexOutOfRange,
  kDuplicateIndex,
  kNumericalFailure,
  kNotPositiveDefinite,
  kNotPositiveSemidefinite,
  kRiccatiFailure,
  kCombinatorialBudgetExceeded,
  kNotOrthonormalRows,
  kSingularGram,
  kNotUnitVector,
  kNotEventuallyReachable,
  kUnsupportedOrder,
  kUnknownFixture,
  kZeroDistance,
  kLambdaAtLeastOne,
  kNonFiniteState,
  kNotWellDefined,
  kDegenerateRange,
  kPiSingular,
  kNoFeasibleMu,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library. The code identifies the failed
/// contract so callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDuplicateIndex: return "DuplicateIndex";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kNotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::kRiccatiFailure: return "RiccatiFailure";
    case ErrorCode::kCombinatorialBudgetExceeded: return "CombinatorialBudgetExceeded";
    case ErrorCode::kNotOrthonormalRows: return "NotOrthonormalRows";
    case ErrorCode::kSingularGram: return "SingularGram";
    case ErrorCode::kNotUnitVector: return "NotUnitVector";
    case ErrorCode::kNotEventuallyReachable: return "NotEventuallyReachable";
    case ErrorCode::kUnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::kUnknownFixture: return "UnknownFixture";
    case ErrorCode::kZeroDistance: return "ZeroDistance";
    case ErrorCode::kLambdaAtLeastOne: return "LambdaAtLeastOne";
    case ErrorCode::kNonFiniteState: return "NonFiniteState";
    case ErrorCode::kNotWellDefined: return "NotWellDefined";
    case ErrorCode::kDegenerateRange: return "DegenerateRange";
    case ErrorCode::kPiSingular: return "PiSingular";
    case ErrorCode::kNoFeasibleMu: return "NoFeasibleMu";
  }
  return "Unknown";
}

}  // namespace resilock
