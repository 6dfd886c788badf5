#pragma once

#include <stdexcept>
#include <string>

namespace fidget {

enum class ErrorCode {
  InvalidArgument,
  Io,
  Parse,
  Schema,
  JointMismatch,
  DegenerateScale,
  TooShort,
  SingleClass,
  EmptyDataset,
  DimensionMismatch,
  TooFewSubjects,
  MissingPart,
  EmptyMask,
  EmptyInput,
  InvalidProfile,
  DegenerateCluster,
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fidget
