#include "uwbresp/config.hpp"

#include <cmath>
#include <string>

#include "uwbresp/error.hpp"

namespace uwbresp {

void validate_band(const FrequencyBand& band, double dt_slow) {
  const double nyquist = 0.5 / dt_slow;
  if (!(band.low_hz > 0.0) || !(band.high_hz > band.low_hz) || !(band.high_hz < nyquist)) {
    throw Error(ErrorCode::kInvalidBand, "band " + std::to_string(band.low_hz) + ".." +
                                             std::to_string(band.high_hz) +
                                             " Hz must satisfy 0 < low < high < Nyquist (" +
                                             std::to_string(nyquist) + " Hz)");
  }
}

void validate(const PipelineConfig& cfg, std::size_t traces, double dt_slow) {
  validate_band(cfg.respiration_band, dt_slow);
  validate_band(cfg.bandpass_band, dt_slow);
  if (!cfg.bandpass_band.contains(cfg.respiration_band)) {
    throw Error(ErrorCode::kInvalidConfig, "respiration_band must lie inside bandpass_band");
  }
  if (cfg.bandpass_taps == 0 || cfg.bandpass_taps % 2 == 0) {
    throw Error(ErrorCode::kInvalidConfig, "bandpass_taps must be odd and positive");
  }
  if (cfg.mean_filter_window == 0 || cfg.mean_filter_window % 2 == 0) {
    throw Error(ErrorCode::kEvenWindow, "mean_filter_window must be odd and positive, got " +
                                            std::to_string(cfg.mean_filter_window));
  }
  if (cfg.mean_filter_window > traces) {
    throw Error(ErrorCode::kInvalidConfig, "mean_filter_window exceeds the number of traces");
  }
  if (!(cfg.background_alpha >= 0.0 && cfg.background_alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "background_alpha must be in [0, 1)");
  }
  if (!(cfg.threshold_k > 0.0) || !std::isfinite(cfg.threshold_k)) {
    throw Error(ErrorCode::kInvalidConfig, "threshold_k must be positive");
  }
  if (cfg.spectrum_zero_pad != 1 && cfg.spectrum_zero_pad != 4) {
    throw Error(ErrorCode::kInvalidConfig, "spectrum_zero_pad must be 1 or 4");
  }
}

}  // namespace uwbresp
