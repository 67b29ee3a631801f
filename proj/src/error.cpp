#include "uwbresp/error.hpp"

namespace uwbresp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionTooSmall: return "dimension too small";
    case ErrorCode::kNonFiniteSample: return "non-finite sample";
    case ErrorCode::kNonPositiveInterval: return "non-positive sampling interval";
    case ErrorCode::kIndexOutOfRange: return "index out of range";
    case ErrorCode::kInvalidBand: return "invalid frequency band";
    case ErrorCode::kBandTooNarrow: return "band too narrow";
    case ErrorCode::kInvalidConfig: return "invalid configuration";
    case ErrorCode::kEvenWindow: return "even filter window";
    case ErrorCode::kPulseTruncated: return "pulse truncated";
    case ErrorCode::kEchoOutsideWindow: return "echo outside fast-time window";
    case ErrorCode::kNoSignal: return "no signal in respiration band";
    case ErrorCode::kNoUsableSpectrum: return "no usable spectrum";
    case ErrorCode::kEmptyGrid: return "empty sweep grid";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kUnsupportedVersion: return "unsupported format version";
    case ErrorCode::kTruncatedPayload: return "truncated payload";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kConfigParse: return "config parse error";
  }
  return "unknown error";
}

}  // namespace uwbresp
