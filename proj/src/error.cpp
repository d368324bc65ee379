#include "litalk/error.hpp"

namespace litalk {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidPair: return "InvalidPair";
    case ErrorCode::kOddLength: return "OddLength";
    case ErrorCode::kPayloadLengthMismatch: return "PayloadLengthMismatch";
    case ErrorCode::kNoPacket: return "NoPacket";
    case ErrorCode::kBlobOutOfFrame: return "BlobOutOfFrame";
    case ErrorCode::kDegenerateRange: return "DegenerateRange";
    case ErrorCode::kFrameTooSmall: return "FrameTooSmall";
    case ErrorCode::kOffsetOutsideBlob: return "OffsetOutsideBlob";
    case ErrorCode::kColumnTooShort: return "ColumnTooShort";
    case ErrorCode::kNoTransitions: return "NoTransitions";
    case ErrorCode::kDegenerateFit: return "DegenerateFit";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kFormat: return "Format";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace litalk
