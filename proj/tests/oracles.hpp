#pragma once

// Reference computations used only by tests. None of these call into the
// library routines they are used to check.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "uwbresp/radargram.hpp"
#include "uwbresp/simulator.hpp"

namespace uwbresp::oracle {

/// Full N-bin DFT by direct summation.
std::vector<std::complex<double>> direct_dft(std::span<const double> x);

/// Least-squares line via the raw 2x2 normal equations.
struct Line {
  double intercept;
  double slope;
};
Line normal_equations_line(std::span<const double> y);

/// Amplitude of the sinusoid at `freq_hz` in x[first, last) by projection onto
/// cos/sin.
double tone_amplitude(std::span<const double> x, double freq_hz, double dt, std::size_t first, std::size_t last);

/// Centred moving average over an explicitly built reflect-padded copy.
std::vector<double> moving_average(std::span<const double> x, std::size_t window);

/// Independent max and RMS loops.
double brute_peak_factor(std::span<const double> v);

/// Fractional fast-time bin of the primary body echo at rest.
double nominal_body_bin(const SceneConfig& cfg, double dt_fast, std::size_t body_index = 0);

std::vector<double> random_series(std::size_t n, std::uint64_t seed, double scale = 1.0);

Radargram zeros(std::size_t bins, std::size_t traces, double dt_fast = 1.0 / 39e9, double dt_slow = 0.1);

/// One-row-per-bin radargram holding the given series in every bin.
Radargram series_radargram(const std::vector<std::vector<double>>& rows, double dt_slow = 0.1);

}  // namespace uwbresp::oracle
