#include "uwbresp/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "uwbresp/error.hpp"
#include "uwbresp/parallel.hpp"

namespace uwbresp {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Impl {
  std::size_t length = 0;
  double* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;

  explicit Impl(std::size_t n) : length(n) {
    std::lock_guard lock(planner_mutex());
    in = fftw_alloc_real(n);
    out = fftw_alloc_complex(n / 2 + 1);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(out);
    fftw_free(in);
  }
};

RealFft::RealFft(std::size_t length) {
  if (length < 1) throw Error(ErrorCode::kDimensionTooSmall, "FFT length must be positive");
  impl_ = std::make_unique<Impl>(length);
}
RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

std::size_t RealFft::length() const noexcept { return impl_->length; }

std::vector<std::complex<double>> RealFft::forward(std::span<const double> x) {
  const std::size_t n = impl_->length;
  if (x.size() > n) throw Error(ErrorCode::kIndexOutOfRange, "FFT input longer than transform");
  std::copy(x.begin(), x.end(), impl_->in);
  std::fill(impl_->in + x.size(), impl_->in + n, 0.0);
  fftw_execute(impl_->plan);
  std::vector<std::complex<double>> result(n / 2 + 1);
  for (std::size_t k = 0; k < result.size(); ++k) result[k] = {impl_->out[k][0], impl_->out[k][1]};
  return result;
}

SpectrumMatrix slow_time_spectrum(const Radargram& g, const SpectrumOptions& opts) {
  if (opts.zero_pad < 1) throw Error(ErrorCode::kInvalidConfig, "zero_pad must be >= 1");
  const std::size_t length = g.traces() * opts.zero_pad;
  const std::size_t freqs = length / 2 + 1;
  SpectrumMatrix spec;
  spec.bins = g.bins();
  spec.freq_axis.resize(freqs);
  const double df = 1.0 / (static_cast<double>(length) * g.dt_slow());
  for (std::size_t j = 0; j < freqs; ++j) spec.freq_axis[j] = static_cast<double>(j) * df;
  spec.magnitudes.resize(g.bins() * freqs);

  parallel_chunks(g.bins(), opts.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    RealFft fft(length);
    for (std::size_t m = begin; m < end; ++m) {
      const auto bins = fft.forward(g.row(m));
      double* dst = spec.magnitudes.data() + m * freqs;
      for (std::size_t j = 0; j < freqs; ++j) {
        const double mag = std::abs(bins[j]);
        dst[j] = opts.power ? mag * mag : mag;
      }
    }
  });
  return spec;
}

SpectrumMatrix band_window(const SpectrumMatrix& spec, const FrequencyBand& band) {
  if (spec.freq_count() == 0) throw Error(ErrorCode::kBandTooNarrow, "empty spectrum");
  const double df = spec.freq_count() > 1 ? spec.freq_axis[1] - spec.freq_axis[0] : 0.0;
  // Inclusive edges; the slack absorbs rounding in j / (N * dt_slow).
  const double slack = 1e-9 * df;
  std::size_t first = spec.freq_count();
  std::size_t last = 0;
  for (std::size_t j = 0; j < spec.freq_count(); ++j) {
    const double f = spec.freq_axis[j];
    if (f >= band.low_hz - slack && f <= band.high_hz + slack) {
      first = std::min(first, j);
      last = j;
    }
  }
  if (first > last || last - first + 1 < 2) {
    throw Error(ErrorCode::kBandTooNarrow, "band " + std::to_string(band.low_hz) + ".." +
                                               std::to_string(band.high_hz) +
                                               " Hz covers fewer than 2 frequency bins");
  }
  const std::size_t width = last - first + 1;
  SpectrumMatrix out;
  out.bins = spec.bins;
  out.freq_axis.assign(spec.freq_axis.begin() + static_cast<std::ptrdiff_t>(first),
                       spec.freq_axis.begin() + static_cast<std::ptrdiff_t>(last + 1));
  out.magnitudes.resize(spec.bins * width);
  for (std::size_t m = 0; m < spec.bins; ++m) {
    const auto row = spec.row(m);
    std::copy_n(row.begin() + static_cast<std::ptrdiff_t>(first), width, out.magnitudes.begin() + static_cast<std::ptrdiff_t>(m * width));
  }
  return out;
}

PeakFactor peak_factor(std::span<const double> windowed) {
  if (windowed.size() < 2) {
    throw Error(ErrorCode::kBandTooNarrow, "peak factor needs at least 2 spectral values");
  }
  PeakFactor pf;
  pf.y_max = windowed[0];
  double scale = 0.0;
  for (std::size_t i = 0; i < windowed.size(); ++i) {
    const double y = windowed[i];
    scale = std::max(scale, std::abs(y));
    if (y > pf.y_max) {
      pf.y_max = y;
      pf.peak_index = i;
    }
  }
  if (scale == 0.0) throw Error(ErrorCode::kNoSignal, "no signal in respiration band");
  // Squares of tiny spectral tails underflow; work relative to the largest value.
  double sum_sq = 0.0;
  for (double y : windowed) sum_sq += (y / scale) * (y / scale);
  const double rel_rms = std::sqrt(sum_sq / static_cast<double>(windowed.size()));
  pf.y_rms = scale * rel_rms;
  pf.value = (pf.y_max / scale) / rel_rms;
  return pf;
}

PeakFactorProfile profile(const Radargram& g, const PipelineConfig& cfg) {
  const auto spec = slow_time_spectrum(g, {.zero_pad = 1, .power = cfg.power_spectrum, .threads = cfg.threads});
  const auto window = band_window(spec, cfg.respiration_band);
  PeakFactorProfile prof;
  prof.band_used = cfg.respiration_band;
  prof.freq_resolution_hz = spec.freq_axis[1] - spec.freq_axis[0];
  prof.bins.resize(g.bins());
  for (std::size_t m = 0; m < g.bins(); ++m) {
    const auto row = window.row(m);
    BinPeakFactor& out = prof.bins[m];
    if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) {
      out.degenerate = true;
      out.pf = PeakFactor{};
      out.peak_freq_hz = window.freq_axis.front();
      continue;
    }
    out.pf = peak_factor(row);
    out.peak_freq_hz = window.freq_axis[out.pf.peak_index];
  }
  return prof;
}

}  // namespace uwbresp
