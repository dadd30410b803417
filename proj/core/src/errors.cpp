#include "npfs/errors.hpp"

namespace npfs {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateRemainder: return "DegenerateRemainder";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::DegenerateFold: return "DegenerateFold";
    case ErrorCode::NoFeasibleCandidate: return "NoFeasibleCandidate";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingLabelColumn: return "MissingLabelColumn";
    case ErrorCode::InsufficientClassSamples: return "InsufficientClassSamples";
    case ErrorCode::SpecError: return "SpecError";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::TrajectoryMismatch: return "TrajectoryMismatch";
  }
  return "Error";
}

int error_exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularCovariance:
    case ErrorCode::DegenerateRemainder:
    case ErrorCode::DegenerateFold:
    case ErrorCode::NoFeasibleCandidate:
      return 3;
    case ErrorCode::TrajectoryMismatch:
      return 4;
    default:
      return 2;
  }
}

}  // namespace npfs
