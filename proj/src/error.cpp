#include "linkfold/error.hpp"

namespace linkfold {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::degenerate_triangle: return "degenerate-triangle";
    case ErrorCode::infeasible_lengths: return "infeasible-lengths";
    case ErrorCode::convergence_failure: return "convergence-failure";
    case ErrorCode::singular_constraint: return "singular-constraint";
    case ErrorCode::near_contact: return "near-contact";
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::stalled: return "stalled";
    case ErrorCode::no_connection_found: return "no-connection-found";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace linkfold
