#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace linkfold {

enum class ErrorCode {
  invalid_input,
  degenerate_triangle,
  infeasible_lengths,
  convergence_failure,
  singular_constraint,
  near_contact,
  invalid_params,
  stalled,
  no_connection_found,
  io_error,
};

std::string_view to_string(ErrorCode code);

/// All library failures are reported through this exception type; `code()`
/// identifies the failure class for callers that need to branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace linkfold
