#include "kahler/error.hpp"

namespace kahler {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::DimensionTooSmall: return "dimension-too-small";
    case ErrorCode::DegreeOutOfRange: return "degree-out-of-range";
    case ErrorCode::WrongDegree: return "wrong-degree";
    case ErrorCode::ResourceLimit: return "resource-limit";
    case ErrorCode::DegenerateSample: return "degenerate-sample";
    case ErrorCode::DegeneratePlane: return "degenerate-plane";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::SpaceMismatch: return "space-mismatch";
    case ErrorCode::IndexError: return "index-error";
    case ErrorCode::DegenerateDenominator: return "degenerate-denominator";
    case ErrorCode::NotNegativelyCurved: return "not-negatively-curved";
    case ErrorCode::IdentityInconsistency: return "identity-inconsistency";
    case ErrorCode::NotConverged: return "not-converged";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace kahler
