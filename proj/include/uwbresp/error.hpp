#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uwbresp {

enum class ErrorCode {
  kDimensionTooSmall,
  kNonFiniteSample,
  kNonPositiveInterval,
  kIndexOutOfRange,
  kInvalidBand,
  kBandTooNarrow,
  kInvalidConfig,
  kEvenWindow,
  kPulseTruncated,
  kEchoOutsideWindow,
  kNoSignal,
  kNoUsableSpectrum,
  kEmptyGrid,
  kBadMagic,
  kUnsupportedVersion,
  kTruncatedPayload,
  kIo,
  kConfigParse,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; callers that need to
// distinguish failure modes switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace uwbresp
