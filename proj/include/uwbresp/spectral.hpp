#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "uwbresp/config.hpp"
#include "uwbresp/preprocess.hpp"

namespace uwbresp {

/// Real-input forward DFT of a fixed length. Instances are not shareable
/// between threads; create one per worker.
class RealFft {
 public:
  explicit RealFft(std::size_t length);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t length() const noexcept;
  /// Bins 0..length/2 of sum_n x[n] exp(-2 pi i k n / length). `x.size()`
  /// must not exceed length(); shorter input is zero-padded.
  std::vector<std::complex<double>> forward(std::span<const double> x);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SpectrumMatrix {
  std::vector<double> magnitudes;  // bins x freq_count, row-major
  std::vector<double> freq_axis;
  std::size_t bins = 0;

  std::size_t freq_count() const noexcept { return freq_axis.size(); }
  std::span<const double> row(std::size_t bin) const {
    return {magnitudes.data() + bin * freq_count(), freq_count()};
  }
};

struct SpectrumOptions {
  // Transform length is zero_pad * N.
  std::size_t zero_pad = 1;
  bool power = false;
  unsigned threads = 1;
};

/// One-sided |DFT| of each range bin's slow-time series (rectangular window).
SpectrumMatrix slow_time_spectrum(const Radargram& g, const SpectrumOptions& opts = {});
inline SpectrumMatrix slow_time_spectrum(const PreprocessedRadargram& g,
                                         const SpectrumOptions& opts = {}) {
  return slow_time_spectrum(g.data, opts);
}

/// Columns j with low_hz <= f(j) <= high_hz. Throws Error(kBandTooNarrow)
/// when fewer than two bins fall inside the band.
SpectrumMatrix band_window(const SpectrumMatrix& spec, const FrequencyBand& band);

struct PeakFactor {
  double value = 1.0;  // y_max / y_rms
  double y_max = 0.0;
  double y_rms = 0.0;
  std::size_t peak_index = 0;  // lowest index on ties
};

/// Throws Error(kNoSignal) for an all-zero window and Error(kBandTooNarrow)
/// for fewer than two values.
PeakFactor peak_factor(std::span<const double> windowed);

struct BinPeakFactor {
  PeakFactor pf;
  double peak_freq_hz = 0.0;
  bool degenerate = false;
};

struct PeakFactorProfile {
  std::vector<BinPeakFactor> bins;
  FrequencyBand band_used;
  double freq_resolution_hz = 0.0;
};

/// Spectrum -> band window -> peak factor for every range bin. Bins with an
/// all-zero window get P = 1 and degenerate = true.
PeakFactorProfile profile(const Radargram& g, const PipelineConfig& cfg);
inline PeakFactorProfile profile(const PreprocessedRadargram& g, const PipelineConfig& cfg) {
  return profile(g.data, cfg);
}

}  // namespace uwbresp
