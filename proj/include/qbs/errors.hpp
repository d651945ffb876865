#pragma once

#include <stdexcept>
#include <string>

namespace qbs {

enum class ErrorCode {
  invalid_prefix,
  precondition,
  dimension,
  zero_probability_branch,
  invalid_size,
  singular_matrix,
  invalid_argument,
  target_not_found,
  restart_budget_exhausted,
  resource_limit,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qbs
