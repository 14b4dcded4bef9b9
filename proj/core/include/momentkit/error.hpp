#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace momentkit {

enum class ErrorCode {
  kInvalidArgument,
  kDegreeExceeded,
  kDimensionMismatch,
  kDegenerateScale,
  kUnboundedSupport,
  kNotConverged,
  kNotNormalized,
  kNegativeEvenMoment,
  kOscillationUnderresolved,
  kInfeasible,
  kSmoothingFailed,
  kParseError,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Numbers in error messages, printed with %.7g.
std::string format_number(double v);

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace momentkit
