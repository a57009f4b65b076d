#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fwipm {

enum class ErrorCode {
  kNotPsd,
  kNotPd,
  kSingular,
  kDimMismatch,
  kBadDims,
  kNotInterior,
  kDegenerateObjective,
  kUnbounded,
  kZeroDirection,
  kMonotoneAlongDirection,
  kNoStartingPoint,
  kPreconditionViolated,
  kParseError,
  kAsymmetricEntry,
  kInvariantViolated,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fwipm
