#pragma once

#include <stdexcept>
#include <string>

namespace gss {

enum class ErrorCode {
  kInvalidParams,
  kBadInput,
  kOverflow,
  kZeroTotal,
  kLengthMismatch,
  kEmptyFirstSlot,
  kRegimeMismatch,
  kBudgetExceeded,
  kLengthExceedsField,
  kTooManyErasures,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams: return "INVALID_PARAMS";
    case ErrorCode::kBadInput: return "BAD_INPUT";
    case ErrorCode::kOverflow: return "OVERFLOW";
    case ErrorCode::kZeroTotal: return "ZERO_TOTAL";
    case ErrorCode::kLengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::kEmptyFirstSlot: return "EMPTY_FIRST_SLOT";
    case ErrorCode::kRegimeMismatch: return "REGIME_MISMATCH";
    case ErrorCode::kBudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::kLengthExceedsField: return "LENGTH_EXCEEDS_FIELD";
    case ErrorCode::kTooManyErasures: return "TOO_MANY_ERASURES";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gss
