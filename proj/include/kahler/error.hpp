#pragma once

#include <stdexcept>
#include <string>

namespace kahler {

enum class ErrorCode {
  InvalidDimension = 1,
  DimensionTooSmall,
  DegreeOutOfRange,
  WrongDegree,
  ResourceLimit,
  DegenerateSample,
  DegeneratePlane,
  Precondition,
  SpaceMismatch,
  IndexError,
  DegenerateDenominator,
  NotNegativelyCurved,
  IdentityInconsistency,
  NotConverged,
  Parse,
  Io,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace kahler
