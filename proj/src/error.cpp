#include "fidget/error.hpp"

namespace fidget {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Schema: return "SchemaError";
    case ErrorCode::JointMismatch: return "JointMismatch";
    case ErrorCode::DegenerateScale: return "DegenerateScale";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooFewSubjects: return "TooFewSubjects";
    case ErrorCode::MissingPart: return "MissingPart";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::DegenerateCluster: return "DegenerateCluster";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace fidget
