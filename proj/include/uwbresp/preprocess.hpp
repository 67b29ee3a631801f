#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uwbresp/config.hpp"
#include "uwbresp/radargram.hpp"

namespace uwbresp {

inline constexpr const char* kStageRemoveDc = "remove_dc";
inline constexpr const char* kStageDetrend = "detrend_linear";
inline constexpr const char* kStageBackground = "suppress_background";
inline constexpr const char* kStageBandpass = "bandpass_slow_time";
inline constexpr const char* kStageMeanFilter = "mean_filter";
inline constexpr const char* kStageNormalize = "normalize";
inline constexpr const char* kStageNormalizeDegenerate = "normalize:degenerate";

struct PreprocessedRadargram {
  Radargram data;
  std::vector<std::string> stage_log;

  bool normalize_degenerate() const;
};

// Slow-time stages. Each operates on every range bin independently; `threads`
// only changes scheduling, never the result.
Radargram remove_dc(const Radargram& g, unsigned threads = 1);
Radargram detrend_linear(const Radargram& g, unsigned threads = 1);
/// Exponential background b[n] = (1-alpha) b[n-1] + alpha s[n], b[-1] = s[0];
/// the output is s[n] - b[n-1].
Radargram suppress_background(const Radargram& g, double alpha, unsigned threads = 1);
Radargram bandpass_slow_time(const Radargram& g, const FrequencyBand& band, std::size_t taps,
                             unsigned threads = 1);
Radargram mean_filter(const Radargram& g, std::size_t window, unsigned threads = 1);

struct NormalizeResult {
  Radargram data;
  bool degenerate = false;
};
/// Divides by the global max |sample|; an all-zero input is returned as is.
NormalizeResult normalize(const Radargram& g);

/// remove_dc -> detrend_linear -> suppress_background -> bandpass_slow_time
/// -> mean_filter -> normalize.
PreprocessedRadargram run_pipeline(const Radargram& g, const PipelineConfig& cfg);

namespace detail {

/// Hamming-windowed band-pass: difference of windowed-sinc low-passes at
/// band.high_hz and band.low_hz. `taps` must be odd.
std::vector<double> design_bandpass(const FrequencyBand& band, std::size_t taps, double dt_slow);

/// Index into a length-n series under whole-sample symmetric reflection
/// (..., x2, x1, x0, x1, x2, ...), valid for any integer position.
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n);

/// Same-length convolution with an odd, centred kernel over a
/// reflect-padded copy of `x`.
void convolve_reflect(std::span<const double> x, std::span<const double> kernel,
                      std::span<double> out);

}  // namespace detail

}  // namespace uwbresp
