#pragma once

#include <stdexcept>
#include <string>

namespace placement {

enum class ErrorCode {
  degenerate_input,
  no_stable_face,
  volume_outside_grid,
  joint_limit,
  leaf_node,
  exhausted,
  invalid_goal,
  unknown_goal,
  precondition_failed,
  parse_error,
  io_error,
};

const char* error_code_name(ErrorCode code);

class PlannerError : public std::runtime_error {
 public:
  PlannerError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw PlannerError(code, what);
}

}  // namespace placement
