#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace uwbresp {

/// Speed of light in vacuum, m/s.
inline constexpr double kSpeedOfLight = 299'792'458.0;

/// Two-dimensional radar record. Row m holds the slow-time series of range
/// bin m (fast-time sample m of every trace), so samples are addressed as
/// (range_bin, trace_index) in row-major order.
class Radargram {
 public:
  /// Validates and takes ownership of `samples` (size must be bins * traces).
  /// Throws Error on dimension < 2, non-finite samples or non-positive
  /// sampling intervals.
  Radargram(std::vector<double> samples, std::size_t bins, std::size_t traces, double dt_fast,
            double dt_slow);

  /// Builds from a nested row list (one inner vector per range bin).
  static Radargram from_rows(const std::vector<std::vector<double>>& rows, double dt_fast,
                             double dt_slow);

  std::size_t bins() const noexcept { return bins_; }
  std::size_t traces() const noexcept { return traces_; }
  double dt_fast() const noexcept { return dt_fast_; }
  double dt_slow() const noexcept { return dt_slow_; }

  double fast_window() const noexcept { return static_cast<double>(bins_) * dt_fast_; }
  double observation_time() const noexcept { return static_cast<double>(traces_) * dt_slow_; }
  double slow_nyquist() const noexcept { return 0.5 / dt_slow_; }

  double at(std::size_t bin, std::size_t trace) const { return samples_[bin * traces_ + trace]; }
  std::span<const double> row(std::size_t bin) const {
    return {samples_.data() + bin * traces_, traces_};
  }
  std::span<const double> samples() const noexcept { return samples_; }

  /// Copy with the same axes and new sample values; revalidates.
  Radargram with_samples(std::vector<double> samples) const;

  friend bool operator==(const Radargram&, const Radargram&) = default;

 private:
  std::vector<double> samples_;
  std::size_t bins_;
  std::size_t traces_;
  double dt_fast_;
  double dt_slow_;
};

/// One-way distance of fast-time bin m: m * dt_fast * c / 2.
double range_of_bin(const Radargram& g, std::size_t bin);
double range_of_bin(double dt_fast, std::size_t bin);

/// Nearest bin to a one-way distance; throws if it falls outside [0, M).
std::size_t bin_of_range(const Radargram& g, double range_m);

/// Fractional bin position of a two-way delay.
inline double bin_of_delay(double delay_s, double dt_fast) { return delay_s / dt_fast; }

}  // namespace uwbresp
