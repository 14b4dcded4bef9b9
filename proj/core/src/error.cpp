#include "momentkit/error.hpp"

#include <cstdio>

namespace momentkit {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegreeExceeded: return "DegreeExceeded";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDegenerateScale: return "DegenerateScale";
    case ErrorCode::kUnboundedSupport: return "UnboundedSupport";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kNegativeEvenMoment: return "NegativeEvenMoment";
    case ErrorCode::kOscillationUnderresolved: return "OscillationUnderresolved";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kSmoothingFailed: return "SmoothingFailed";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7g", v);
  return buf;
}

}  // namespace momentkit
