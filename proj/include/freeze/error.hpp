#pragma once

#include <stdexcept>
#include <string>

namespace freeze {

enum class ErrorCode {
  invalid_bounds,
  too_few_cells,
  invalid_argument,
  non_finite,
  dimension_mismatch,
  missing_reference,
  singular_system,
  non_spd,
  stale_factor,
  step_size_underflow,
  group_degenerate,
  config,
  io,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` lets callers and tests
/// distinguish failure classes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_bounds: return "invalid-bounds";
    case ErrorCode::too_few_cells: return "too-few-cells";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::non_finite: return "non-finite";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::missing_reference: return "missing-reference";
    case ErrorCode::singular_system: return "singular-system";
    case ErrorCode::non_spd: return "non-spd";
    case ErrorCode::stale_factor: return "stale-factor";
    case ErrorCode::step_size_underflow: return "step-size-underflow";
    case ErrorCode::group_degenerate: return "group-degenerate";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace freeze
