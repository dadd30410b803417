#pragma once

#include <stdexcept>
#include <string>

namespace npfs {

enum class ErrorCode {
  EmptyClass,
  NonFinite,
  SingularCovariance,
  LengthMismatch,
  IndexOutOfRange,
  DegenerateRemainder,
  EmptySelection,
  InvalidK,
  DegenerateFold,
  NoFeasibleCandidate,
  ParseError,
  MissingLabelColumn,
  InsufficientClassSamples,
  SpecError,
  SchemaMismatch,
  TrajectoryMismatch,
};

const char* error_code_name(ErrorCode code);

// Process exit class used by the CLI: 2 input error, 3 numerical failure,
// 4 trajectory mismatch.
int error_exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  int exit_code() const noexcept { return error_exit_code(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace npfs
