#include "uwbresp/radargram.hpp"

#include <cmath>
#include <string>

#include "uwbresp/error.hpp"

namespace uwbresp {

Radargram::Radargram(std::vector<double> samples, std::size_t bins, std::size_t traces,
                     double dt_fast, double dt_slow)
    : samples_(std::move(samples)), bins_(bins), traces_(traces), dt_fast_(dt_fast), dt_slow_(dt_slow) {
  if (bins_ < 2 || traces_ < 2) {
    throw Error(ErrorCode::kDimensionTooSmall, "radargram needs at least 2x2 samples, got " +
                                                   std::to_string(bins_) + "x" + std::to_string(traces_));
  }
  if (samples_.size() != bins_ * traces_) {
    throw Error(ErrorCode::kDimensionTooSmall, "sample count " + std::to_string(samples_.size()) +
                                                   " does not match " + std::to_string(bins_) + "x" +
                                                   std::to_string(traces_));
  }
  if (!(dt_fast_ > 0.0) || !std::isfinite(dt_fast_)) {
    throw Error(ErrorCode::kNonPositiveInterval, "dt_fast must be positive");
  }
  if (!(dt_slow_ > 0.0) || !std::isfinite(dt_slow_)) {
    throw Error(ErrorCode::kNonPositiveInterval, "dt_slow must be positive");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw Error(ErrorCode::kNonFiniteSample, "non-finite sample at bin " + std::to_string(i / traces_) +
                                                   ", trace " + std::to_string(i % traces_));
    }
  }
}

Radargram Radargram::from_rows(const std::vector<std::vector<double>>& rows, double dt_fast,
                               double dt_slow) {
  const std::size_t bins = rows.size();
  const std::size_t traces = bins ? rows.front().size() : 0;
  std::vector<double> flat;
  flat.reserve(bins * traces);
  for (const auto& r : rows) {
    if (r.size() != traces) throw Error(ErrorCode::kDimensionTooSmall, "ragged radargram rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Radargram(std::move(flat), bins, traces, dt_fast, dt_slow);
}

Radargram Radargram::with_samples(std::vector<double> samples) const {
  return Radargram(std::move(samples), bins_, traces_, dt_fast_, dt_slow_);
}

double range_of_bin(double dt_fast, std::size_t bin) {
  return static_cast<double>(bin) * dt_fast * kSpeedOfLight / 2.0;
}

double range_of_bin(const Radargram& g, std::size_t bin) {
  if (bin >= g.bins()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "range bin " + std::to_string(bin) + " outside [0, " + std::to_string(g.bins()) + ")");
  }
  return range_of_bin(g.dt_fast(), bin);
}

std::size_t bin_of_range(const Radargram& g, double range_m) {
  const double pos = std::round(2.0 * range_m / (g.dt_fast() * kSpeedOfLight));
  if (!(pos >= 0.0) || pos >= static_cast<double>(g.bins())) {
    throw Error(ErrorCode::kIndexOutOfRange, "range " + std::to_string(range_m) + " m outside the window");
  }
  return static_cast<std::size_t>(pos);
}

}  // namespace uwbresp
