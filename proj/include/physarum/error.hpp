#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace physarum {

enum class ErrorCode {
  invalid_problem,
  parse_error,
  dimension_mismatch,
  unbalanced_demands,
  nonpositive_cost,
  invalid_argument,
  empty_support,
  infeasible_on_support,
  too_large,
  infeasible,
  boundary_contact,
  numerical_failure,
  divergence,
  wrong_dimension,
  insufficient_data,
  inconclusive,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_problem: return "invalid-problem";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::unbalanced_demands: return "unbalanced-demands";
    case ErrorCode::nonpositive_cost: return "nonpositive-cost";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::empty_support: return "empty-support";
    case ErrorCode::infeasible_on_support: return "infeasible-on-support";
    case ErrorCode::too_large: return "too-large";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::boundary_contact: return "boundary-contact";
    case ErrorCode::numerical_failure: return "numerical-failure";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::wrong_dimension: return "wrong-dimension";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::inconclusive: return "inconclusive";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace physarum
