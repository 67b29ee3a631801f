#pragma once

#include <cstddef>

namespace uwbresp {

struct FrequencyBand {
  double low_hz = 0.0;
  double high_hz = 0.0;

  bool contains(const FrequencyBand& inner) const {
    return inner.low_hz >= low_hz && inner.high_hz <= high_hz;
  }
  friend bool operator==(const FrequencyBand&, const FrequencyBand&) = default;
};

/// Throws Error(kInvalidBand) unless 0 < low < high < 1/(2*dt_slow).
void validate_band(const FrequencyBand& band, double dt_slow);

// Detection hits this many bins apart or closer belong to one target.
inline constexpr std::size_t kDefaultMergeRadius = 7;

struct PipelineConfig {
  FrequencyBand respiration_band{0.3, 0.8};
  FrequencyBand bandpass_band{0.2, 1.0};
  std::size_t bandpass_taps = 101;
  std::size_t mean_filter_window = 5;
  double background_alpha = 0.05;
  double threshold_k = 6.0;
  std::size_t merge_radius_bins = kDefaultMergeRadius;
  // Peak factor on |Y|^2 instead of |Y|.
  bool power_spectrum = false;
  // Display-only zero padding of exported spectra (1 or 4); detection always
  // runs on the unpadded transform.
  std::size_t spectrum_zero_pad = 1;
  // Worker threads for per-bin stages; 0 means hardware concurrency, 1 serial.
  unsigned threads = 0;
};

/// Checks the config against a radargram of `traces` traces sampled every
/// `dt_slow` seconds. Throws Error(kInvalidConfig / kInvalidBand / kEvenWindow).
void validate(const PipelineConfig& cfg, std::size_t traces, double dt_slow);

}  // namespace uwbresp
