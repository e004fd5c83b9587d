#pragma once

#include <stdexcept>
#include <string>

namespace geonet {

// Error taxonomy; the CLI maps codes onto process exit codes.
enum class ErrorCode {
  invalid_input,    // bad parameters, malformed scenarios, domain violations
  outside_chart,    // a point or trajectory left the chart domain
  no_convergence,   // an iteration hit its cap without meeting tolerance
  non_unique,       // boundary-value connection admits multiple solutions
  degenerate,       // operation undefined on a degenerate triangle
  inconsistent,     // internal cross-check failed (e.g. no bracket where one must exist)
  io_error,         // filesystem problems
};

class GeonetError : public std::runtime_error {
 public:
  GeonetError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::outside_chart: return "outside_chart";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::non_unique: return "non_unique";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::inconsistent: return "inconsistent";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace geonet
