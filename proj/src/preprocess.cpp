#include "uwbresp/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uwbresp/error.hpp"
#include "uwbresp/parallel.hpp"

namespace uwbresp {
namespace {

// Applies fn(in_row, out_row) to every range bin.
template <class Fn>
Radargram map_rows(const Radargram& g, unsigned threads, Fn&& fn) {
  const std::size_t n = g.traces();
  std::vector<double> out(g.samples().size());
  parallel_for(g.bins(), threads, [&](std::size_t m) {
    fn(g.row(m), std::span<double>(out.data() + m * n, n));
  });
  return g.with_samples(std::move(out));
}

double mean_of(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

}  // namespace

bool PreprocessedRadargram::normalize_degenerate() const {
  return std::find(stage_log.begin(), stage_log.end(), kStageNormalizeDegenerate) != stage_log.end();
}

Radargram remove_dc(const Radargram& g, unsigned threads) {
  return map_rows(g, threads, [](std::span<const double> in, std::span<double> out) {
    const double mean = mean_of(in);
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] - mean;
  });
}

Radargram detrend_linear(const Radargram& g, unsigned threads) {
  const std::size_t n = g.traces();
  const double center = 0.5 * static_cast<double>(n - 1);
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(i) - center;
    sxx += d * d;
  }
  auto subtract_fit = [&](std::span<const double> in, std::span<double> out) {
    const double mean = mean_of(in);
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) sxy += (static_cast<double>(i) - center) * (in[i] - mean);
    const double slope = sxy / sxx;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = (in[i] - mean) - slope * (static_cast<double>(i) - center);
    }
  };
  return map_rows(g, threads, [&](std::span<const double> in, std::span<double> out) {
    subtract_fit(in, out);
    // Second pass removes the rounding left in the first fit.
    subtract_fit(out, out);
  });
}

Radargram suppress_background(const Radargram& g, double alpha, unsigned threads) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "background alpha must be in [0, 1)");
  }
  return map_rows(g, threads, [alpha](std::span<const double> in, std::span<double> out) {
    double background = in[0];
    for (std::size_t i = 0; i < in.size(); ++i) {
      out[i] = in[i] - background;
      background = (1.0 - alpha) * background + alpha * in[i];
    }
  });
}

namespace detail {

std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  std::ptrdiff_t r = i % period;
  if (r < 0) r += period;
  if (r >= static_cast<std::ptrdiff_t>(n)) r = period - r;
  return static_cast<std::size_t>(r);
}

void convolve_reflect(std::span<const double> x, std::span<const double> kernel, std::span<double> out) {
  const auto half = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < kernel.size(); ++j) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j) + half;
      acc += kernel[j] * x[reflect_index(src, n)];
    }
    out[i] = acc;
  }
}

std::vector<double> design_bandpass(const FrequencyBand& band, std::size_t taps, double dt_slow) {
  if (taps == 0 || taps % 2 == 0) throw Error(ErrorCode::kInvalidConfig, "band-pass taps must be odd");
  validate_band(band, dt_slow);
  const double fh = band.high_hz * dt_slow;  // cycles per sample
  const double fl = band.low_hz * dt_slow;
  const auto lowpass = [](double fc, double k) {
    if (k == 0.0) return 2.0 * fc;
    return std::sin(2.0 * std::numbers::pi * fc * k) / (std::numbers::pi * k);
  };
  std::vector<double> h(taps);
  const double half = static_cast<double>(taps / 2);
  for (std::size_t i = 0; i < taps; ++i) {
    const double k = static_cast<double>(i) - half;
    const double window =
        taps == 1 ? 1.0 : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(taps - 1));
    h[i] = window * (lowpass(fh, k) - lowpass(fl, k));
  }
  return h;
}

}  // namespace detail

Radargram bandpass_slow_time(const Radargram& g, const FrequencyBand& band, std::size_t taps, unsigned threads) {
  const auto h = detail::design_bandpass(band, taps, g.dt_slow());
  return map_rows(g, threads, [&](std::span<const double> in, std::span<double> out) {
    std::vector<double> pass(in.size());
    detail::convolve_reflect(in, h, pass);
    std::reverse(pass.begin(), pass.end());
    detail::convolve_reflect(pass, h, out);
    std::reverse(out.begin(), out.end());
  });
}

Radargram mean_filter(const Radargram& g, std::size_t window, unsigned threads) {
  if (window == 0 || window % 2 == 0) {
    throw Error(ErrorCode::kEvenWindow, "mean filter window must be odd and positive, got " + std::to_string(window));
  }
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  const double w = static_cast<double>(window);
  return map_rows(g, threads, [&](std::span<const double> in, std::span<double> out) {
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::ptrdiff_t d = -half; d <= half; ++d) {
        sum += in[detail::reflect_index(static_cast<std::ptrdiff_t>(i) + d, n)];
      }
      out[i] = sum / w;
    }
  });
}

NormalizeResult normalize(const Radargram& g) {
  double peak = 0.0;
  for (double v : g.samples()) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return {g, true};
  std::vector<double> out(g.samples().begin(), g.samples().end());
  for (double& v : out) v /= peak;
  return {g.with_samples(std::move(out)), false};
}

PreprocessedRadargram run_pipeline(const Radargram& g, const PipelineConfig& cfg) {
  validate(cfg, g.traces(), g.dt_slow());
  const unsigned threads = cfg.threads;
  std::vector<std::string> log;
  Radargram x = remove_dc(g, threads);
  log.emplace_back(kStageRemoveDc);
  x = detrend_linear(x, threads);
  log.emplace_back(kStageDetrend);
  x = suppress_background(x, cfg.background_alpha, threads);
  log.emplace_back(kStageBackground);
  x = bandpass_slow_time(x, cfg.bandpass_band, cfg.bandpass_taps, threads);
  log.emplace_back(kStageBandpass);
  x = mean_filter(x, cfg.mean_filter_window, threads);
  log.emplace_back(kStageMeanFilter);
  auto norm = normalize(x);
  log.emplace_back(kStageNormalize);
  if (norm.degenerate) log.emplace_back(kStageNormalizeDegenerate);
  return {std::move(norm.data), std::move(log)};
}

}  // namespace uwbresp
