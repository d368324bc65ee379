#pragma once

#include <stdexcept>
#include <string>

namespace litalk {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidPair,
  kOddLength,
  kPayloadLengthMismatch,
  kNoPacket,
  kBlobOutOfFrame,
  kDegenerateRange,
  kFrameTooSmall,
  kOffsetOutsideBlob,
  kColumnTooShort,
  kNoTransitions,
  kDegenerateFit,
  kIo,
  kFormat,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code tells callers what failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace litalk
